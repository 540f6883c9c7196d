"""Scan critical branchings within bounds, with and without the nail-loop rules."""

import argparse
import time
from dataclasses import asdict, dataclass

from dgklrw.confluence import BranchingBounds, branchings_at, enumerate_critical_branchings, nail_loop_braid_family
from dgklrw.rewriting import RewriteSystem


@dataclass
class ScanConfig:
    max_black: int = 3
    max_colored: int = 2
    max_gap: int = 2
    max_dots: int = 3
    family_black: int = 5
    workers: int = 1


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    for name, value in asdict(ScanConfig()).items():
        parser.add_argument(f"--{name.replace('_', '-')}", type=int, default=value)
    cfg = ScanConfig(**vars(parser.parse_args()))
    bounds = BranchingBounds(cfg.max_black, cfg.max_colored, cfg.max_gap, cfg.max_dots)
    for loop_rules in (True, False):
        start = time.perf_counter()
        report = enumerate_critical_branchings(bounds, loop_rules=loop_rules, workers=cfg.workers)
        print(f"loop rules {'on ' if loop_rules else 'off'}: {report.summary()} "
              f"({time.perf_counter() - start:.1f}s)")
        for br in report.non_joinable[:5]:
            print(f"  non-joinable {br.rules}: {br.source}")
    family = BranchingBounds(cfg.family_black, cfg.max_colored, cfg.max_gap, cfg.max_dots)
    for loop_rules in (True, False):
        rw = RewriteSystem(loop_rules=loop_rules)
        verdicts = [br.joinable for m in nail_loop_braid_family(family) for br in branchings_at(m, rw)[0]]
        print(f"nail-loop braid family, loop rules {'on ' if loop_rules else 'off'}: "
              f"{sum(map(bool, verdicts))}/{len(verdicts)} joinable")


if __name__ == "__main__":
    main()
