"""Tree expansion of the formal inverse and its alignment restrictions."""

import itertools
import logging
from collections import Counter
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from models.poly_map import PolyMap
from models.polynomial import Monomial, Polynomial
from models.reports import AlignmentVerdict, IdentityReport
from models.tree import EdgeOrder, Leaf, Node, Tree, Vertex
from services.keller_checker import KellerChecker
from utils.config import Config
from utils.errors import ConditionalCheckError, GuardExceededError, PreconditionError
from utils.validators import IndexValidator

logger = logging.getLogger(__name__)


class TreeExpander:
    """Planar trees of F(y) = y + V(F(y)).

    A tree with root index i is either the bare leaf y_i or a vertex
    V_{i; j_1..j_Q} whose Q ordered children are trees with root indices
    j_1..j_Q. Children are ordered, so no 1/(r! N!) prefactor appears: the
    symmetric tensor entries already carry the multinomial weights.
    """

    @staticmethod
    def check_guards(vertex: PolyMap, cap: int) -> None:
        """Refuse exhaustive enumeration outside the configured guards.

        Raises:
            PreconditionError: If cap < 1
            GuardExceededError: If cap, n or d exceeds its guard
        """
        if cap < 1:
            raise PreconditionError(f"tree order must be at least 1, got {cap}")
        max_leaves = Config.tree_max_leaves()
        if cap > max_leaves:
            raise GuardExceededError(
                f"tree order {cap} exceeds the enumeration guard of {max_leaves} leaves")
        if vertex.n > Config.tree_max_dim():
            raise GuardExceededError(
                f"dimension {vertex.n} exceeds the enumeration guard {Config.tree_max_dim()}")
        if vertex.d > Config.tree_max_degree():
            raise GuardExceededError(
                f"degree {vertex.d} exceeds the enumeration guard {Config.tree_max_degree()}")

    @staticmethod
    def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
        """Ordered ways of writing ``total`` as ``parts`` positive integers."""
        for cuts in itertools.combinations(range(1, total), parts - 1):
            bounds = (0,) + cuts + (total,)
            yield tuple(bounds[k + 1] - bounds[k] for k in range(parts))

    @staticmethod
    def enumerate_trees(vertex: PolyMap, order: int,
                        root_index: Optional[int] = None) -> Iterator[Tree]:
        """Yield every tree with exactly ``order`` leaves and nonzero entries.

        Args:
            vertex: A vertex without linear part
            order: Number of leaves N
            root_index: Restrict to one root index; all roots 1..n otherwise

        Raises:
            PreconditionError: If order < 1 or V has a linear part
        """
        if order < 1:
            raise PreconditionError(f"tree order must be at least 1, got {order}")
        if vertex.has_linear_part:
            raise PreconditionError("tree expansion needs a vertex without linear part")
        view = vertex.symmetric_view()
        memo: Dict[Tuple[int, int], List[Node]] = {}

        def nodes(index: int, leaves: int) -> List[Node]:
            key = (index, leaves)
            if key in memo:
                return memo[key]
            found: List[Node] = []
            if leaves == 1:
                found.append(Leaf(index))
            else:
                for outgoing, _ in view.arrangements(index, min_degree=2):
                    if len(outgoing) > leaves:
                        continue
                    for split in TreeExpander._compositions(leaves, len(outgoing)):
                        choices = [nodes(j, m) for j, m in zip(outgoing, split)]
                        for children in itertools.product(*choices):
                            found.append(Vertex(index, tuple(children)))
            memo[key] = found
            return found

        roots = range(1, vertex.n + 1) if root_index is None else [root_index]
        for i in roots:
            for node in nodes(i, order):
                yield Tree(node)

    @staticmethod
    def edge_order(tree: Tree) -> EdgeOrder:
        """Tree order (ancestor relation) and around-the-tree order (preorder)."""
        pairs = frozenset((ancestor, edge.position)
                          for edge in tree.edges
                          for ancestor in tree.ancestors(edge.position))
        return EdgeOrder(pairs, tuple(edge.position for edge in tree.edges))

    @staticmethod
    def tree_value(tree: Tree, vertex: PolyMap) -> Polynomial:
        """Product of the tensor entries times the monomial of the leaves."""
        view = vertex.symmetric_view()
        weight = Fraction(1)
        for node in tree.vertices():
            weight *= view.entry(node.index, node.out_indices)
            if not weight:
                return Polynomial.zero(vertex.n)
        exps = Monomial.from_indices(vertex.n, tree.leaf_indices())
        return Polynomial(vertex.n, {exps: weight})

    @staticmethod
    def tree_length(tree: Tree) -> int:
        """Number of edges in the longest root-to-leaf chain."""
        return max(edge.depth for edge in tree.edges)

    @staticmethod
    def _levels(n: int, ranking: Optional[Sequence[int]]) -> List[int]:
        if ranking is None:
            return list(range(1, n + 1))
        return IndexValidator.validate_permutation(ranking, n)

    @staticmethod
    def alignment_filter(tree: Tree, k: int, n: Optional[int] = None,
                         ranking: Optional[Sequence[int]] = None) -> AlignmentVerdict:
        """Decide whether a tree has no aligned^q pair of edges for q <= k.

        Two edges of index q are aligned^q when one is an ancestor of the
        other and no edge strictly between them has an index ranked below q.
        Level 0 applies no restriction.

        Args:
            tree: The tree to test
            k: Filter level, 0..n
            n: Dimension; defaults to the largest index in the tree
            ranking: Level of each index 1..n, identity when omitted

        Returns:
            AlignmentVerdict with the positions of the first aligned pair
        """
        if n is None:
            n = max(edge.index for edge in tree.edges)
        if not 0 <= k <= n:
            raise PreconditionError(f"filter level must lie in 0..{n}, got {k}")
        levels = TreeExpander._levels(n, ranking)
        edges = tree.edges
        for edge in edges:
            level = levels[edge.index - 1]
            if level > k:  # index not filtered at this level
                continue
            # Walk up to the root, tracking the lowest level seen in between
            lowest_between = None
            for ancestor in tree.ancestors(edge.position):
                above = edges[ancestor]
                # Same index with nothing ranked lower in between: aligned
                if above.index == edge.index and (lowest_between is None or lowest_between >= level):
                    return AlignmentVerdict(k, False, (ancestor, edge.position))
                above_level = levels[above.index - 1]
                if lowest_between is None or above_level < lowest_between:
                    lowest_between = above_level
        return AlignmentVerdict(k, True)

    @staticmethod
    def tree_sum(vertex: PolyMap, cap: int) -> List[Polynomial]:
        """Sum of tree values over all trees with at most ``cap`` leaves."""
        return TreeExpander.restricted_sum(vertex, cap, 0)

    @staticmethod
    def restricted_sum(vertex: PolyMap, cap: int, k: int,
                       ranking: Optional[Sequence[int]] = None) -> List[Polynomial]:
        """F(|<=k): the tree sum over alignment survivors at level k.

        Raises:
            GuardExceededError: If the enumeration guards are exceeded
        """
        TreeExpander.check_guards(vertex, cap)
        sums = [Polynomial.zero(vertex.n) for _ in range(vertex.n)]
        counted = 0
        for order in range(1, cap + 1):
            for tree in TreeExpander.enumerate_trees(vertex, order):
                counted += 1
                if k and not TreeExpander.alignment_filter(tree, k, vertex.n, ranking).survives:
                    continue
                i = tree.root_index - 1
                sums[i] = sums[i] + TreeExpander.tree_value(tree, vertex)
        logger.debug("summed %d trees up to order %d at filter level %d", counted, cap, k)
        return sums

    @staticmethod
    def tree_statistics(vertex: PolyMap, max_order: int,
                        ranking: Optional[Sequence[int]] = None) -> Dict[str, Dict[str, int]]:
        """Tree counts per order, length histogram and survivors per level.

        Levels run over 0..n, level 0 counting every tree.
        """
        TreeExpander.check_guards(vertex, max_order)
        counts: Dict[str, int] = {}
        lengths: Counter = Counter()
        survivors: Counter = Counter()
        for order in range(1, max_order + 1):
            count = 0
            for tree in TreeExpander.enumerate_trees(vertex, order):
                count += 1
                lengths[TreeExpander.tree_length(tree)] += 1
                for k in range(vertex.n + 1):
                    if k and not TreeExpander.alignment_filter(tree, k, vertex.n, ranking).survives:
                        # survivors at k also survive below k
                        break
                    survivors[k] += 1
            counts[str(order)] = count
        return {
            'counts_per_order': counts,
            'length_histogram': {str(length): lengths[length] for length in sorted(lengths)},
            'survivors_per_level': {str(k): survivors[k] for k in range(vertex.n + 1)},
        }

    @staticmethod
    def factorization_check(vertex: PolyMap, cap: int,
                            ranking: Optional[Sequence[int]] = None) -> IdentityReport:
        """Compare F with F(|<=n) order by order through ``cap``.

        The report also records the longest surviving tree against 2^n - 1
        and, per length L, the largest surviving monomial degree against
        d^(L-1).

        Raises:
            ConditionalCheckError: If V fails the Jacobian hypothesis
            GuardExceededError: If the enumeration guards are exceeded
        """
        TreeExpander.check_guards(vertex, cap)
        keller = KellerChecker.keller_check(vertex)
        if not keller.is_keller:
            raise ConditionalCheckError(
                f"factorization check needs a Keller map; det(I - V') - 1 has term {keller.witness}")
        n, d = vertex.n, vertex.d
        full = [Polynomial.zero(n) for _ in range(n)]
        restricted = [Polynomial.zero(n) for _ in range(n)]
        max_length = 0
        degree_by_length: Dict[int, int] = {}
        for order in range(1, cap + 1):
            for tree in TreeExpander.enumerate_trees(vertex, order):
                value = TreeExpander.tree_value(tree, vertex)
                i = tree.root_index - 1
                full[i] = full[i] + value
                if not TreeExpander.alignment_filter(tree, n, n, ranking).survives:
                    continue
                restricted[i] = restricted[i] + value
                length = TreeExpander.tree_length(tree)
                max_length = max(max_length, length)
                degree_by_length[length] = max(degree_by_length.get(length, 0), tree.leaf_count)

        length_bound = 2 ** n - 1
        degree_ok = all(degree <= d ** (length - 1) for length, degree in degree_by_length.items())
        details = {
            'cap': cap,
            'max_surviving_length': max_length,
            'length_bound': length_bound,
            'length_bound_holds': max_length <= length_bound,
            'max_degree_per_length': {str(length): degree_by_length[length]
                                      for length in sorted(degree_by_length)},
            'degree_per_length_holds': degree_ok,
        }
        for i, (left, right) in enumerate(zip(full, restricted), start=1):
            difference = left - right
            if not difference.is_zero():
                exps, coeff = difference.lowest_term()
                witness = (f"component {i}: F - F(|<=n) has term "
                           f"{Polynomial(n, {exps: coeff}).render('y')}")
                logger.info("factorization fails: %s", witness)
                return IdentityReport("factorization", False, witness, details)
        return IdentityReport("factorization", True, details=details)
