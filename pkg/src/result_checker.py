"""
Consistency checks on algorithm results
"""

from fractions import Fraction
from typing import Dict, List, Optional

from models import Instance, ApproxResult, Cover, format_rational
from instance_core import is_convex, is_cover, overwritten_set, recoloring_cost
from harness import get_algorithm


class ResultChecker:
    """Checks results against the guarantees of the algorithm that produced them"""

    def check(self, inst: Instance, result: ApproxResult,
              lower_bound: Optional[Fraction] = None, opt: Optional[Fraction] = None) -> List[Dict]:
        """
        Validate a result and return the issues found

        Args:
            inst: Instance the result belongs to
            result: Algorithm output
            lower_bound: Penalty lower bound, if computed
            opt: Exact optimum, if computed

        Returns:
            List of issues with "field", "issue" and "severity" (empty if all valid)
        """
        issues = []

        if not is_cover(inst, result.cover):
            issues.append({
                "field": "cover",
                "issue": "Removing the cover leaves a non-convex coloring",
                "severity": "error"
            })

        if result.coloring is not None:
            if not result.coloring.is_total:
                issues.append({
                    "field": "coloring",
                    "issue": "Recoloring leaves vertices uncolored",
                    "severity": "error"
                })
            elif not is_convex(inst, result.coloring):
                issues.append({
                    "field": "coloring",
                    "issue": "Recoloring is not convex",
                    "severity": "error"
                })
            elif recoloring_cost(inst, result.coloring) > result.cost:
                issues.append({
                    "field": "cost",
                    "issue": "Recoloring costs more than the reported cost",
                    "severity": "error"
                })
            elif not overwritten_set(inst, result.coloring) <= result.cover.members:
                issues.append({
                    "field": "coloring",
                    "issue": "Recoloring changes vertices outside the cover",
                    "severity": "warning"
                })

        bound = self._bound(result.algorithm)
        if lower_bound is not None and result.algorithm == "string2" and result.cost > 2 * lower_bound:
            issues.append({
                "field": "cost",
                "issue": f"Cost {format_rational(result.cost)} exceeds the penalty sum",
                "severity": "error"
            })

        if lower_bound is not None and result.cost < lower_bound:
            issues.append({
                "field": "cost",
                "issue": f"Cost {format_rational(result.cost)} is below the lower bound {format_rational(lower_bound)}",
                "severity": "error"
            })

        if opt is not None:
            if result.cost < opt:
                issues.append({
                    "field": "cost",
                    "issue": f"Cost {format_rational(result.cost)} is below OPT {format_rational(opt)}",
                    "severity": "error"
                })
            elif bound is not None and result.cost > bound * opt:
                issues.append({
                    "field": "cost",
                    "issue": f"Cost {format_rational(result.cost)} exceeds {bound} x OPT",
                    "severity": "error"
                })
            elif opt > 0 and result.cost == opt:
                issues.append({
                    "field": "cost",
                    "issue": "Result is optimal",
                    "severity": "info"
                })

        return issues

    def check_cover(self, inst: Instance, cover: Cover) -> List[Dict]:
        """Issues of a user-supplied cover"""
        if is_cover(inst, cover):
            return []
        return [{
            "field": "cover",
            "issue": "Removing the cover leaves a non-convex coloring",
            "severity": "error"
        }]

    def _bound(self, algorithm: str) -> Optional[int]:
        try:
            return get_algorithm(algorithm).bound
        except ValueError:
            return None
