"""Seeded generation of fixture maps."""

import logging
import random
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

from models.poly_map import PolyMap
from models.poly_matrix import ScalarMatrix, scalar_identity, scalar_matmul
from models.polynomial import Monomial, Polynomial
from utils.map_file import MapFile

logger = logging.getLogger(__name__)

MALFORMED_FIXTURE = """{
  "components": [
    [
      {"coeff": "1", "exps": [0, 2, 1]}
    ],
    []
  ],
  "d": 2,
  "n": 2
}
"""


class CorpusGenerator:
    """Generates Keller maps whose inverses are known to be polynomial.

    Triangular vertices (V_i depending on x_{i+1}..x_n only), their
    conjugates by elementary shears and compositions of nonlinear
    elementary maps are Keller; adding a strictly upper
    triangular linear part keeps them Keller with a nilpotent linear part.
    The same seed always produces the same corpus.
    """

    COEFFICIENTS = (-2, -1, 1, 2)

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.rng = random.Random(seed)

    def random_polynomial(self, n: int, variables: Sequence[int], min_degree: int,
                          max_degree: int, max_terms: int = 2) -> Polynomial:
        """A sum of up to ``max_terms`` monomials in the given 1-based variables."""
        if not variables:
            return Polynomial.zero(n)
        terms: Dict[Tuple[int, ...], Fraction] = {}
        for _ in range(self.rng.randint(1, max_terms)):
            degree = self.rng.randint(min_degree, max_degree)
            indices = [self.rng.choice(list(variables)) for _ in range(degree)]
            exps = Monomial.from_indices(n, indices)
            terms[exps] = terms.get(exps, Fraction(0)) + self.rng.choice(self.COEFFICIENTS)
        return Polynomial(n, terms)

    def triangular_map(self, n: int, d: int, linear: bool = False) -> PolyMap:
        """V_i in x_{i+1}..x_n, degrees 2..d, optionally with a linear part."""
        components = []
        for i in range(1, n + 1):
            later = list(range(i + 1, n + 1))
            component = self.random_polynomial(n, later, 2, d)
            if linear and later:
                j = self.rng.choice(later)
                component = component + Polynomial.variable(n, j).scale(self.rng.choice(self.COEFFICIENTS))
            components.append(component)
        return PolyMap(components, d)

    def shear(self, n: int) -> Tuple[ScalarMatrix, ScalarMatrix]:
        """Elementary matrix I + c E_ij (i != j) and its inverse I - c E_ij."""
        i, j = self.rng.sample(range(n), 2)
        c = Fraction(self.rng.choice(self.COEFFICIENTS))
        matrix = scalar_identity(n)
        inverse = scalar_identity(n)
        matrix[i][j] = c
        inverse[i][j] = -c
        return matrix, inverse

    def conjugated_map(self, n: int, d: int, linear: bool = False, shears: int = 2) -> PolyMap:
        """A triangular map conjugated by a product of elementary shears."""
        vertex = self.triangular_map(n, d, linear)
        matrix, inverse = scalar_identity(n), scalar_identity(n)
        for _ in range(shears):
            step, step_inverse = self.shear(n)
            matrix = scalar_matmul(step, matrix)
            inverse = scalar_matmul(inverse, step_inverse)
        return vertex.conjugate_linear(matrix, inverse)

    def elementary_map(self, n: int, index: int, d: int = 2) -> PolyMap:
        """Vertex of x_index -> x_index - f, with f of degree 2..d free of x_index."""
        others = [j for j in range(1, n + 1) if j != index]
        components = [Polynomial.zero(n)] * n
        components[index - 1] = self.random_polynomial(n, others, 2, d)
        return PolyMap(components, d)

    def composed_map(self, n: int, d: int = 2, steps: int = 2) -> PolyMap:
        """A composition of elementary maps, each moving a different coordinate than the last.

        With quadratic steps the vertex has degree up to 2^steps and is in
        general neither triangular nor a linear conjugate of a triangular map.
        """
        index = self.rng.randint(1, n)
        vertex = self.elementary_map(n, index, d)
        for _ in range(steps - 1):
            index = self.rng.choice([j for j in range(1, n + 1) if j != index])
            vertex = self.elementary_map(n, index, d).compose(vertex)
        return vertex

    @staticmethod
    def documented_maps() -> Dict[str, PolyMap]:
        """The hand-checked examples, Keller and not."""
        x1, x2 = Polynomial.variable(2, 1), Polynomial.variable(2, 2)
        y2, y3 = Polynomial.variable(3, 2), Polynomial.variable(3, 3)
        t = Polynomial.variable(1, 1)
        zero = Polynomial.zero(2)
        s = x1 + x2
        return {
            'shift_square': PolyMap([x2 * x2, zero]),
            'chain_cubic': PolyMap([y2 * y3, y3 * y3, Polynomial.zero(3)]),
            'sum_square': PolyMap([s * s, -(s * s)]),
            'shift_with_linear': PolyMap([x2 + x2 * x2, zero]),
            'zero_map': PolyMap.zero(2),
            'diagonal_square': PolyMap([x1 * x1, zero]),
            'catalan': PolyMap([t * t]),
            'linear_diagonal': PolyMap([x1, zero]),
        }

    def fixtures(self) -> List[Tuple[str, PolyMap]]:
        """Documented maps followed by the generated Keller families."""
        fixtures = list(self.documented_maps().items())
        for n in (2, 3, 4):
            for d in (2, 3):
                for k in range(5):
                    fixtures.append((f"triangular_n{n}_d{d}_{k}", self.triangular_map(n, d)))
        for n in (2, 3):
            for d in (2, 3):
                for k in range(4):
                    fixtures.append((f"conjugated_n{n}_d{d}_{k}", self.conjugated_map(n, d)))
        for n in (2, 3, 4):
            for k in range(4):
                fixtures.append((f"nilpotent_n{n}_d2_{k}", self.triangular_map(n, 2, linear=True)))
        for n in (2, 3):
            for k in range(2):
                fixtures.append((f"nilpotent_conjugated_n{n}_d2_{k}",
                                 self.conjugated_map(n, 2, linear=True)))
        for n in (2, 3):
            for k in range(4):
                fixtures.append((f"composed_n{n}_{k}", self.composed_map(n)))
        logger.debug("generated %d fixtures from seed %d", len(fixtures), self.seed)
        return fixtures

    def write(self, directory: Union[str, Path]) -> List[Path]:
        """Write every fixture plus one malformed file into ``directory``."""
        target = Path(directory)
        target.mkdir(parents=True, exist_ok=True)
        written = [MapFile.dump(vertex, target / f"{name}.json") for name, vertex in self.fixtures()]
        malformed = target / "malformed_exps.json"
        malformed.write_text(MALFORMED_FIXTURE, encoding="utf-8")
        written.append(malformed)
        logger.info("wrote %d corpus files to %s", len(written), target)
        return written
