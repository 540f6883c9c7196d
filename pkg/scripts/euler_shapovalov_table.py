"""Tabulate the unit monomial relating Euler characteristics to the Shapovalov form."""

import argparse
from dataclasses import dataclass
from itertools import product

from dgklrw.dg import euler_vs_shapovalov
from dgklrw.diagrams import parse_weights


@dataclass
class TableConfig:
    palette: str = "i1,i2,g0,g-1"
    max_colored: int = 2
    max_black: int = 2
    qcap: int = 10


def main() -> None:
    d = TableConfig()
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--palette", default=d.palette)
    parser.add_argument("--max-colored", type=int, default=d.max_colored)
    parser.add_argument("--max-black", type=int, default=d.max_black)
    parser.add_argument("--qcap", type=int, default=d.qcap)
    cfg = TableConfig(**vars(parser.parse_args()))
    palette = parse_weights(cfg.palette)
    print(f"{'mu':<16} {'b':>2} {'rows':>5} {'unit (sign, q, λ)':<20} match")
    for r in range(1, cfg.max_colored + 1):
        for mu in product(palette, repeat=r):
            for b in range(cfg.max_black + 1):
                rep = euler_vs_shapovalov(mu, b, cfg.qcap)
                units = ", ".join(map(str, sorted(rep.units))) or "-"
                name = ",".join(w.token() for w in mu)
                print(f"{name:<16} {b:>2} {len(rep.rows):>5} {units:<20} {'yes' if rep.ok else 'NO'}")


if __name__ == "__main__":
    main()
