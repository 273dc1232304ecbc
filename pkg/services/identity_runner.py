"""Coordinates the command-level runs and assembles their reports."""

import logging
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional, Tuple, Union

from models.poly_map import PolyMap
from models.polynomial import Polynomial
from models.reports import IdentityReport, RunReport
from services.keller_checker import KellerChecker
from services.series_inverter import SeriesInverter
from services.trace_calculator import TraceCalculator
from services.tree_expander import TreeExpander
from utils.config import Config
from utils.map_file import MapFile

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class IdentityRunner:
    """Main service behind the check, invert, trees and trace commands."""

    def __init__(self, guard_cap: Optional[int] = None):
        """Initialize the runner.

        Args:
            guard_cap: Safety cap on truncation degrees; read from the
                environment when omitted
        """
        self.guard_cap = guard_cap if guard_cap is not None else Config.guard_cap()

    @staticmethod
    @contextmanager
    def _timed(report: RunReport, stage: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            report.timings[stage] = time.perf_counter() - start

    @staticmethod
    def _load(path: PathLike, command: str) -> Tuple[PolyMap, RunReport]:
        text = MapFile.read(path)
        report = RunReport(command, MapFile.digest(text))
        vertex = MapFile.loads(text)
        return vertex, report

    @staticmethod
    def _sibling(path: PathLike, suffix: str) -> Path:
        source = Path(path)
        return source.with_name(f"{source.stem}.{suffix}.json")

    def run_check(self, path: PathLike, reduce_linear: bool = False,
                  output: Optional[PathLike] = None) -> RunReport:
        """Jacobian verdict, norms and linear-part verdict of a map file.

        With ``reduce_linear`` the reduced map W = R (V - V^[1]) is written to
        ``output`` or next to the input as <stem>.reduced.json.

        Raises:
            MapParseError: If the file is malformed
            PreconditionError: If reduce_linear is set and L is not nilpotent
        """
        vertex, report = self._load(path, "check")
        with self._timed(report, "keller_check"):
            keller = KellerChecker.keller_check(vertex)
        report.add_check(IdentityReport("jacobian_determinant", keller.is_keller, keller.witness,
                                        {'det': keller.det_polynomial.render()}))
        report.payload['keller'] = keller.to_dict()
        report.payload['norms'] = KellerChecker.map_norms(vertex).to_dict()
        report.payload['linear_part'] = KellerChecker.nilpotency_verdict(vertex).to_dict()
        report.payload['triangular'] = vertex.is_triangular()

        if reduce_linear:
            with self._timed(report, "linear_reduction"):
                reduction = KellerChecker.linear_reduction(vertex)
            target = Path(output) if output else self._sibling(path, "reduced")
            MapFile.dump(reduction.reduced, target)
            report.payload['linear_reduction'] = dict(reduction.to_dict(), path=str(target))
        logger.info("check %s: is_keller=%s", path, keller.is_keller)
        return report

    def run_invert(self, path: PathLike, cap: Optional[int] = None, certify: bool = False,
                   output: Optional[PathLike] = None) -> RunReport:
        """Truncated inverse of a map file, written as the vertex of the inverse.

        Maps with a nilpotent linear part are inverted through the linear
        reduction. With ``certify`` the residuals are checked and, for Keller
        maps, the observed degree is compared with the degree bounds; a bound
        violation is written next to the output as <stem>.counterexample.json.

        Raises:
            GuardExceededError: If the requested cap exceeds the guard
            InternalInconsistencyError: If a residual is nonzero
        """
        vertex, report = self._load(path, "invert")
        chosen = SeriesInverter.default_cap(vertex, self.guard_cap, cap)
        with self._timed(report, "invert"):
            if vertex.has_linear_part:
                series, reduction = SeriesInverter.invert_with_linear_part(vertex, chosen)
                report.payload['linear_reduction'] = reduction.to_dict()
            else:
                series = SeriesInverter.invert_truncated(vertex, chosen)
        target = Path(output) if output else self._sibling(path, "inverse")
        MapFile.dump(series.inverse_vertex(), target)
        report.payload['inverse'] = dict(series.to_dict(), path=str(target))

        if certify:
            with self._timed(report, "certify"):
                certificate = SeriesInverter.certify_polynomial(vertex, series)
            report.add_check(IdentityReport("inverse_residuals", certificate.residual_norm_zero,
                                            details=certificate.to_dict()))
            if not vertex.has_linear_part:
                report.add_check(SeriesInverter.growth_check(vertex, series))
            keller = KellerChecker.keller_check(vertex)
            bounds = []
            # the bounds are stated for d >= 2; a linear or zero map has none
            applicable = keller.is_keller and vertex.d >= 2
            if vertex.d >= 2:
                rules = ["homogeneous", "linear_part"] if vertex.has_linear_part else ["homogeneous"]
            else:
                rules = []
            for rule in rules:
                degree = SeriesInverter.degree_report(series, vertex.d, rule)
                bounds.append(degree.to_dict())
                if applicable:
                    report.add_check(IdentityReport(f"degree_bound_{rule}", degree.within_bound,
                                                    details=degree.to_dict()))
                    if not degree.within_bound:
                        self._write_counterexample(target, vertex, degree.to_dict())
            report.payload['degree_bounds'] = {'applicable': applicable, 'reports': bounds}
        logger.info("invert %s: cap %d, highest order %d", path, chosen, series.highest_order())
        return report

    @staticmethod
    def _write_counterexample(target: Path, vertex: PolyMap, degree: dict) -> Path:
        artifact = target.with_name(f"{target.stem}.counterexample.json")
        MapFile.dump_document({'map': vertex.to_dict(), 'degree_bound': degree}, artifact)
        logger.error("degree bound violated; counterexample written to %s", artifact)
        return artifact

    def run_trees(self, path: PathLike, order: int, filter_level: Optional[int] = None,
                  factorization: bool = False) -> RunReport:
        """Tree statistics, the tree/iteration equivalence and the factorization check.

        Raises:
            GuardExceededError: If the enumeration guards are exceeded
            ConditionalCheckError: If factorization is requested on a non-Keller map
        """
        vertex, report = self._load(path, "trees")
        with self._timed(report, "statistics"):
            report.payload['statistics'] = TreeExpander.tree_statistics(vertex, order)
        with self._timed(report, "tree_sum"):
            summed = TreeExpander.tree_sum(vertex, order)
            iterated = SeriesInverter.invert_truncated(vertex, order).components
        report.add_check(self._compare("tree_sum_matches_inverse", summed, iterated))
        if filter_level is not None:
            restricted = TreeExpander.restricted_sum(vertex, order, filter_level)
            report.payload['restricted_sum'] = {
                'k': filter_level,
                'components': [component.render("y") for component in restricted],
            }
        if factorization:
            with self._timed(report, "factorization"):
                report.add_check(TreeExpander.factorization_check(vertex, order))
        return report

    @staticmethod
    def _compare(name: str, left, right) -> IdentityReport:
        for i, (a, b) in enumerate(zip(left, right), start=1):
            difference = a - b
            if not difference.is_zero():
                exps, coeff = difference.lowest_term()
                return IdentityReport(name, False, f"component {i}: difference has term "
                                      f"{Polynomial(a.dim, {exps: coeff}).render('y')}")
        return IdentityReport(name, True)

    def run_trace(self, path: PathLike, cap: int) -> RunReport:
        """Trace-log vanishing, min-index partition and restricted product checks."""
        vertex, report = self._load(path, "trace")
        matrix = KellerChecker.jacobian(vertex)
        q_max = TraceCalculator.q_limit(matrix, cap)
        with self._timed(report, "trace_log"):
            series = TraceCalculator.trace_log_series(matrix, cap, q_max)
        if series.value.is_zero():
            report.add_check(IdentityReport("trace_log_vanishes", True, details=series.to_dict()))
        else:
            exps, coeff = series.value.lowest_term()
            report.add_check(IdentityReport("trace_log_vanishes", False,
                                            Polynomial(vertex.n, {exps: coeff}).render(),
                                            series.to_dict()))

        with self._timed(report, "partition"):
            report.add_check(self._partition_consistency(matrix, cap))
            product = TraceCalculator.restricted_exp_product_check(vertex, cap)
        report.add_check(product)
        with self._timed(report, "exp_det"):
            report.add_check(TraceCalculator.exp_det_consistency(vertex, cap))
        return report

    @staticmethod
    def _partition_consistency(matrix, cap: int) -> IdentityReport:
        for power in range(1, cap + 1):
            classes = TraceCalculator.min_index_partition(matrix, power, "auto", cap)
            total = Polynomial.zero(matrix.dim)
            for cls in classes:
                total = total + cls.value
            expected = matrix.power(power, cap).trace()
            if total != expected:
                return IdentityReport("min_index_partition", False,
                                      f"Q = {power}: classes sum to {total.render()}, "
                                      f"trace is {expected.render()}")
        return IdentityReport("min_index_partition", True, details={'powers_checked': cap})
