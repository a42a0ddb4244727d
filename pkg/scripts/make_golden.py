#!/usr/bin/env python3
"""Generate the golden wire files for the worked transcript.

Every random draw is pinned by a tape, so the outputs are byte-stable;
tests/test_acceptance.py and tests/test_cli.py regenerate them and compare
byte-for-byte against tests/golden/.
"""

import pathlib
import sys

from abpre import scheme, wire
from abpre.groups import suite_new
from abpre.policy import compile_lsss, parse_policy
from abpre.rng import TapeRandom

GOLDEN = pathlib.Path(__file__).resolve().parent.parent / "tests" / "golden"

PAYLOAD = b"attribute-based proxy re-encryption demo payload\n"

SETUP_TAPE = [3, 2, 4, 5]
KEYGEN_TAPE = [6]
ENCRYPT_TAPE = [5, 3, 1, 2]  # s, y2, r1, r2
SEAL_TAPE = [9] + ENCRYPT_TAPE + list(range(12))  # KEM draw, encrypt, nonce
RKGEN_TAPE = [4, 3]
REENCRYPT_TAPE = [6]
TRANSFORM_TAPE = [5]


def build():
    suite = suite_new("mock", p=13, g2_exponent=7)
    pp, msk = scheme.setup(suite, ["A", "B"], TapeRandom(SETUP_TAPE))
    sk = scheme.keygen(pp, msk, {"A", "B"}, TapeRandom(KEYGEN_TAPE))
    policy1 = compile_lsss(parse_policy("A AND B"))
    policy2 = compile_lsss(parse_policy("B"))
    m = suite.gt ** 9
    ct1 = scheme.encrypt(pp, m, policy1, True, TapeRandom(ENCRYPT_TAPE))
    rk, dk = scheme.rkgen(pp, msk, sk, {"B"}, TapeRandom(RKGEN_TAPE))
    ct2 = scheme.reencrypt(pp, rk, ct1, policy2, TapeRandom(REENCRYPT_TAPE))
    z, tk = scheme.transform_keygen(dk, TapeRandom(TRANSFORM_TAPE))

    sealed1 = wire.seal(pp, policy1, PAYLOAD, TapeRandom(SEAL_TAPE))
    sealed2 = wire.reencrypt_sealed(pp, rk, sealed1, policy2, TapeRandom(REENCRYPT_TAPE))
    pd = wire.transform_sealed(pp, tk, sealed2)

    return {
        "w1_payload.bin": PAYLOAD,
        "w1_pk.bin": wire.encode_object(pp),
        "w1_msk.bin": wire.encode_object(msk, suite=suite),
        "w1_sk.bin": wire.encode_object(sk),
        "w1_rk_proxy.bin": wire.encode_object(rk),
        "w1_rk_delegatee.bin": wire.encode_object(dk),
        "w1_ct1.bin": wire.encode_object(ct1),
        "w1_ct2.bin": wire.encode_object(ct2),
        "w1_tk.bin": wire.encode_object(tk),
        "w1_z.bin": wire.encode_object(z, suite=suite),
        "w1_partial.bin": wire.encode_object(pd),
        "w1_sealed1.bin": sealed1,
        "w1_sealed2.bin": sealed2,
    }


def main():
    files = build()
    GOLDEN.mkdir(parents=True, exist_ok=True)
    changed = 0
    for name, blob in files.items():
        path = GOLDEN / name
        if not path.exists() or path.read_bytes() != blob:
            path.write_bytes(blob)
            changed += 1
            print(f"wrote {path} ({len(blob)} bytes)")
    if not changed:
        print(f"all {len(files)} golden files already up to date")
    return 0


if __name__ == "__main__":
    sys.exit(main())
