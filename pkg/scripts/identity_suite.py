"""Run the diagram identity families, with and without the nail-loop rules."""

import argparse
from dataclasses import dataclass

from dgklrw.identities import IdentityBounds, run_identity_suite
from dgklrw.rewriting import RewriteSystem


@dataclass
class SuiteConfig:
    max_gap: int = 2
    max_dots: int = 3
    max_slide_dots: int = 3
    max_crossings: int = 3
    max_black: int = 4


def main() -> None:
    d = SuiteConfig()
    parser = argparse.ArgumentParser(description=__doc__)
    for name in vars(d):
        parser.add_argument(f"--{name.replace('_', '-')}", type=int, default=getattr(d, name))
    cfg = SuiteConfig(**vars(parser.parse_args()))
    bounds = IdentityBounds(**vars(cfg))
    for loop_rules in (True, False):
        rep = run_identity_suite(bounds, rewriter=RewriteSystem(loop_rules=loop_rules))
        failed: dict[str, int] = {}
        for f in rep.failures:
            failed[f.case.name] = failed.get(f.case.name, 0) + 1
        print(f"loop rules {'on' if loop_rules else 'off'}: {rep.checked} cases")
        for name, count in rep.by_family.items():
            print(f"  {name:<22} {count:>4} checked, {failed.get(name, 0):>3} failed")


if __name__ == "__main__":
    main()
