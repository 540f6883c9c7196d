"""Check that basis elements are irreducible and that random monomials reduce into the basis."""

import argparse
import random
from dataclasses import dataclass
from itertools import product

from dgklrw.basis import enumerate_basis
from dgklrw.config import DEFAULT_SEED
from dgklrw.diagrams import compositions, parse_weights
from dgklrw.rewriting import RewriteSystem
from dgklrw.sampling import random_monomial


@dataclass
class SweepConfig:
    palette: str = "i1,i2,g0"
    max_colored: int = 2
    max_black: int = 3
    qcap: int = 8
    samples: int = 100
    max_sites: int = 8
    seed: int = DEFAULT_SEED


def main() -> None:
    d = SweepConfig()
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--palette", default=d.palette)
    for name in ("max_colored", "max_black", "qcap", "samples", "max_sites", "seed"):
        parser.add_argument(f"--{name.replace('_', '-')}", type=int, default=getattr(d, name))
    cfg = SweepConfig(**vars(parser.parse_args()))
    rw = RewriteSystem(check_descent=True)
    rng = random.Random(cfg.seed)
    bad = 0
    for r in range(1, cfg.max_colored + 1):
        for mu in product(parse_weights(cfg.palette), repeat=r):
            for b in range(1, cfg.max_black + 1):
                for rho in compositions(b, r):
                    entries = [e for kappa in compositions(b, r) for e in enumerate_basis(mu, kappa, rho, cfg.qcap)]
                    reducible = sum(not rw.is_normal(e.monomial) for e in entries)
                    outside = 0
                    for _ in range(cfg.samples):
                        nf = rw.normal_form(random_monomial(mu, rho, rng.randint(0, cfg.max_sites), rng))
                        for u in nf.monomials():
                            keys = {e.monomial for e in enumerate_basis(mu, u.kappa, rho, u.degree().q + 1)}
                            outside += u not in keys
                    bad += reducible + outside
                    name = ",".join(w.token() for w in mu)
                    print(f"mu={name:<8} rho={rho}: basis {len(entries):>5}, reducible {reducible}, "
                          f"outside basis {outside}")
    print("ok" if bad == 0 else f"{bad} problems")


if __name__ == "__main__":
    main()
