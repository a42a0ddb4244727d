#!/usr/bin/env python3
"""Timing sweep for the pairing backend.

Measures each protocol operation for AND-of-n policies as n grows, plus
the raw pairing and fixed-base exponentiation cost.  All figures are
wall-clock milliseconds on this machine.
"""

import argparse
import time

from abpre import scheme
from abpre.groups import suite_new
from abpre.policy import compile_lsss, parse_policy
from abpre.rng import SeededRandom


def clock(fn, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return out, best * 1000


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="2,5,10,20", help="policy sizes to sweep")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    suite = suite_new("pairing", curve="ss512")
    rng = SeededRandom(args.seed)

    _, t_pair = clock(lambda: suite.pair(suite.g, suite.g2), repeat=10)
    _, t_exp = clock(lambda: suite.g ** rng.below(suite.order), repeat=10)
    print(f"pairing: {t_pair:.2f} ms    fixed-base exp: {t_exp:.2f} ms")
    print()
    print(f"{'n':>3} {'setup':>8} {'keygen':>8} {'encrypt':>8} {'rkgen':>8} "
          f"{'reenc':>8} {'dec_l1':>8} {'dec_l2':>8} {'cycle':>8}")

    for n in sizes:
        universe = [f"attr{i}" for i in range(n)]
        policy = compile_lsss(parse_policy(" AND ".join(universe)))
        (pp, msk), t_setup = clock(lambda: scheme.setup(suite, universe, rng))
        sk, t_keygen = clock(lambda: scheme.keygen(pp, msk, frozenset(universe), rng))
        (rk, dk), t_rkgen = clock(
            lambda: scheme.rkgen(pp, msk, sk, frozenset(universe), rng)
        )
        m = suite.random_target(rng)
        ct, t_encrypt = clock(lambda: scheme.encrypt(pp, m, policy, True, rng))
        _, t_dec1 = clock(lambda: scheme.decrypt_l1(pp, sk, ct))
        ct2, t_reenc = clock(lambda: scheme.reencrypt(pp, rk, ct, policy, rng))
        out, t_dec2 = clock(lambda: scheme.decrypt_l2(pp, dk, ct2))
        assert out == m
        cycle = t_encrypt + t_reenc + t_dec2
        print(f"{n:>3} {t_setup:>8.1f} {t_keygen:>8.1f} {t_encrypt:>8.1f} "
              f"{t_rkgen:>8.1f} {t_reenc:>8.1f} {t_dec1:>8.1f} {t_dec2:>8.1f} "
              f"{cycle:>8.1f}")


if __name__ == "__main__":
    main()
