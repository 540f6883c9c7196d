"""Random valid monomials for property checks."""

from __future__ import annotations

import random
from typing import Sequence

from .diagrams import BLACK, DOT, NAIL, Monomial, Weight, apply_site, crossing_kind, sequence_of


def valid_sites(seq: Sequence[int]) -> list[tuple[int, int]]:
    out = [(DOT, p) for p, lab in enumerate(seq) if lab == BLACK]
    if len(seq) > 1 and seq[1] == BLACK:
        out.append((NAIL, 0))
    for p in range(1, len(seq) - 1):
        if seq[p] == BLACK or seq[p + 1] == BLACK:
            out.append((crossing_kind(seq, p), p))
    return out


def random_monomial(mu: Sequence[Weight], rho: Sequence[int], n_sites: int,
                    rng: random.Random) -> Monomial:
    """Uniform choice among valid sites at every height."""
    seq = sequence_of(rho)
    bottom = seq
    sites = []
    for _ in range(n_sites):
        options = valid_sites(seq)
        if not options:
            break
        site = rng.choice(options)
        sites.append(site)
        seq = apply_site(seq, site)
    return Monomial(mu, bottom, sites)
