"""Command-line workflow for the four system roles.

authority:  setup, keygen, rkgen
delegator:  encrypt (with or without re-encryption enabled)
proxy:      reencrypt, transform
delegatee:  decrypt, transform-keygen, finish

Exit codes: 0 success, 1 policy/authorization failure, 2 format or I/O
error, 3 usage error.  ``--seed`` (an integer, or ``tape:v1,v2,...`` for
transcript replay) makes a run deterministic; it exists for tests and is
refused on the pairing backend unless ``--insecure-seed`` is also given.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import scheme, wire
from .errors import (
    AbpreError,
    BackendMismatch,
    FormatError,
    NonPrimeModulus,
    PolicyNotSatisfied,
    PolicySyntaxError,
    ReencryptionDisabled,
    UnknownAttribute,
    UnsupportedCurve,
)
from .groups import suite_new
from .policy import compile_lsss, parse_policy, satisfying_rows
from .rng import RandomSource, SeededRandom, SystemRandom, TapeRandom

EXIT_OK = 0
EXIT_POLICY = 1
EXIT_FORMAT = 2
EXIT_USAGE = 3

# modulus used for policy inspection when no suite is in play (61-bit prime)
INSPECT_MODULUS = 2**61 - 1

DEFAULT_MOCK_MODULUS = 2**61 - 1
DEFAULT_MOCK_G2 = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="abpre", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def seeded(p):
        p.add_argument("--seed", help="int or tape:v1,v2,... (test only)")
        p.add_argument("--insecure-seed", action="store_true",
                       help="allow --seed with the pairing backend")

    p = sub.add_parser("setup", help="create public params and master key")
    p.add_argument("--universe", required=True, help="file with one attribute per line")
    p.add_argument("--backend", choices=["mock", "pairing"], default="pairing")
    p.add_argument("--curve", default="ss512")
    p.add_argument("--mock-modulus", type=int, default=DEFAULT_MOCK_MODULUS)
    p.add_argument("--mock-g2", type=int, default=DEFAULT_MOCK_G2,
                   help="exponent of the second generator (mock backend)")
    p.add_argument("--out-pk", required=True)
    p.add_argument("--out-msk", required=True)
    seeded(p)

    p = sub.add_parser("keygen", help="issue an attribute secret key")
    p.add_argument("--pk", required=True)
    p.add_argument("--msk", required=True)
    p.add_argument("--attrs", required=True, help='comma-separated, e.g. "A,B"')
    p.add_argument("--out", required=True)
    seeded(p)

    p = sub.add_parser("encrypt", help="seal a file under an access policy")
    p.add_argument("--pk", required=True)
    p.add_argument("--policy", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--no-reencrypt", action="store_true",
                   help="omit g2^s so the ciphertext cannot be re-encrypted")
    seeded(p)

    p = sub.add_parser("rkgen", help="derive re-encryption key material")
    p.add_argument("--pk", required=True)
    p.add_argument("--msk", required=True)
    p.add_argument("--sk", required=True)
    p.add_argument("--delegatee-attrs", required=True)
    p.add_argument("--out-proxy", required=True)
    p.add_argument("--out-delegatee", required=True)
    seeded(p)

    p = sub.add_parser("reencrypt", help="proxy-transform a sealed file to a new policy")
    p.add_argument("--pk", required=True)
    p.add_argument("--rk", required=True)
    p.add_argument("--policy2", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    seeded(p)

    p = sub.add_parser("decrypt", help="open a sealed file")
    p.add_argument("--pk", required=True)
    key = p.add_mutually_exclusive_group(required=True)
    key.add_argument("--sk", help="user secret key (first-level files)")
    key.add_argument("--dk", help="delegatee key (re-encrypted files)")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("transform-keygen", help="blind a delegatee key for outsourcing")
    p.add_argument("--dk", required=True)
    p.add_argument("--out-tk", required=True)
    p.add_argument("--out-z", required=True)
    seeded(p)

    p = sub.add_parser("transform", help="outsourced pairing work on a sealed file")
    p.add_argument("--pk", required=True)
    p.add_argument("--tk", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out-partial", required=True)

    p = sub.add_parser("finish", help="unblind a partial decryption and open the file")
    p.add_argument("--z", required=True)
    p.add_argument("--in-partial", dest="in_partial", required=True)
    p.add_argument("--in-ct", dest="in_ct", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("policy", help="inspect access policies")
    psub = p.add_subparsers(dest="policy_command", required=True)
    c = psub.add_parser("check", help="compile a formula; optionally test an attribute set")
    c.add_argument("--policy", required=True)
    c.add_argument("--attrs")

    return parser


# ---------------------------------------------------------------- helpers --


def _read(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _write(path: str, data: bytes, secret: bool = False):
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    if secret:
        fd = os.open(path, os.O_WRONLY | os.O_CREAT | os.O_TRUNC, 0o600)
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _parse_attrs(text: str) -> frozenset:
    return frozenset(a.strip() for a in text.split(",") if a.strip())


def _make_rng(args) -> RandomSource:
    seed = getattr(args, "seed", None)
    if seed is None:
        return SystemRandom()
    if seed.startswith("tape:"):
        return TapeRandom(int(v) for v in seed[5:].split(","))
    return SeededRandom(int(seed))


def _refuse_pairing_seed(args, suite):
    if (
        getattr(args, "seed", None) is not None
        and suite.backend_id == "pairing"
        and not getattr(args, "insecure_seed", False)
    ):
        print(
            "abpre: error: --seed is test-only; pass --insecure-seed to use it "
            "with the pairing backend",
            file=sys.stderr,
        )
        raise SystemExit(EXIT_USAGE)


def _load_pk(path: str) -> scheme.PublicParams:
    return wire.decode_object(_read(path), wire.TYPE_PK)


# ------------------------------------------------------------- commands --


def _cmd_setup(args) -> int:
    with open(args.universe, "r", encoding="utf-8") as fh:
        universe = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    if args.backend == "mock":
        suite = suite_new("mock", p=args.mock_modulus, g2_exponent=args.mock_g2)
    else:
        suite = suite_new("pairing", curve=args.curve)
    _refuse_pairing_seed(args, suite)
    pp, msk = scheme.setup(suite, universe, _make_rng(args))
    _write(args.out_pk, wire.encode_object(pp))
    _write(args.out_msk, wire.encode_object(msk, suite=suite), secret=True)
    return EXIT_OK


def _cmd_keygen(args) -> int:
    pp = _load_pk(args.pk)
    _refuse_pairing_seed(args, pp.suite)
    msk = wire.decode_object(_read(args.msk), wire.TYPE_MSK, suite=pp.suite)
    sk = scheme.keygen(pp, msk, _parse_attrs(args.attrs), _make_rng(args))
    _write(args.out, wire.encode_object(sk), secret=True)
    return EXIT_OK


def _cmd_encrypt(args) -> int:
    pp = _load_pk(args.pk)
    _refuse_pairing_seed(args, pp.suite)
    policy = compile_lsss(parse_policy(args.policy))
    payload = _read(args.infile)
    sealed = wire.seal(
        pp, policy, payload, _make_rng(args), reencryptable=not args.no_reencrypt
    )
    _write(args.out, sealed)
    return EXIT_OK


def _cmd_rkgen(args) -> int:
    pp = _load_pk(args.pk)
    _refuse_pairing_seed(args, pp.suite)
    msk = wire.decode_object(_read(args.msk), wire.TYPE_MSK, suite=pp.suite)
    sk = wire.decode_object(_read(args.sk), wire.TYPE_SK, suite=pp.suite)
    rk, dk = scheme.rkgen(
        pp, msk, sk, _parse_attrs(args.delegatee_attrs), _make_rng(args)
    )
    _write(args.out_proxy, wire.encode_object(rk), secret=True)
    _write(args.out_delegatee, wire.encode_object(dk), secret=True)
    return EXIT_OK


def _cmd_reencrypt(args) -> int:
    pp = _load_pk(args.pk)
    _refuse_pairing_seed(args, pp.suite)
    rk = wire.decode_object(_read(args.rk), wire.TYPE_RK_PROXY, suite=pp.suite)
    policy2 = compile_lsss(parse_policy(args.policy2))
    out = wire.reencrypt_sealed(pp, rk, _read(args.infile), policy2, _make_rng(args))
    _write(args.out, out)
    return EXIT_OK


def _cmd_decrypt(args) -> int:
    pp = _load_pk(args.pk)
    if args.sk:
        key = wire.decode_object(_read(args.sk), wire.TYPE_SK, suite=pp.suite)
    else:
        key = wire.decode_object(_read(args.dk), wire.TYPE_RK_DELEGATEE, suite=pp.suite)
    payload = wire.open_sealed(pp, key, _read(args.infile))
    _write(args.out, payload)
    return EXIT_OK


def _cmd_transform_keygen(args) -> int:
    dk = wire.decode_object(_read(args.dk), wire.TYPE_RK_DELEGATEE)
    suite = dk.AK.suite
    _refuse_pairing_seed(args, suite)
    z, tk = scheme.transform_keygen(dk, _make_rng(args))
    _write(args.out_tk, wire.encode_object(tk))
    _write(args.out_z, wire.encode_object(z, suite=suite), secret=True)
    return EXIT_OK


def _cmd_transform(args) -> int:
    pp = _load_pk(args.pk)
    tk = wire.decode_object(_read(args.tk), wire.TYPE_TK, suite=pp.suite)
    pd = wire.transform_sealed(pp, tk, _read(args.infile))
    _write(args.out_partial, wire.encode_object(pd))
    return EXIT_OK


def _cmd_finish(args) -> int:
    z = wire.decode_object(_read(args.z), wire.TYPE_TRANSFORM_SECRET)
    pd = wire.decode_object(_read(args.in_partial), wire.TYPE_PARTIAL)
    payload = wire.finish_sealed(z, pd, _read(args.in_ct))
    _write(args.out, payload)
    return EXIT_OK


def policy_explain(formula: str, attrs=None, modulus: int = INSPECT_MODULUS):
    """Compile a formula and report the matrix, rho, and (for an attribute
    set) the reconstruction coefficients.  Returns (text, satisfied) where
    satisfied is None when no attribute set was supplied."""
    matrix = compile_lsss(parse_policy(formula))
    lines = [f"policy: {formula}"]
    body = ",".join("[" + ",".join(str(e) for e in row) + "]" for row in matrix.rows)
    lines.append(f"matrix: [{body}]")
    lines.append("rho: " + " ".join(f"{i + 1}->{a}" for i, a in enumerate(matrix.rho)))
    if attrs is None:
        return "\n".join(lines), None
    lines.append("attrs: {" + ",".join(sorted(attrs)) + "}")
    sel = satisfying_rows(matrix, attrs, modulus)
    if sel is None:
        lines.append("NOT SATISFIED")
        return "\n".join(lines), False
    indices, omega = sel
    lines.append("I = {" + ",".join(str(i + 1) for i in indices) + "}")
    lines.append("omega = (" + ",".join(str(w.value) for w in omega) + ")")
    lines.append("SATISFIED")
    return "\n".join(lines), True


def _cmd_policy_check(args) -> int:
    attrs = _parse_attrs(args.attrs) if args.attrs is not None else None
    text, satisfied = policy_explain(args.policy, attrs)
    print(text)
    return EXIT_OK if satisfied in (True, None) else EXIT_POLICY


_HANDLERS = {
    "setup": _cmd_setup,
    "keygen": _cmd_keygen,
    "encrypt": _cmd_encrypt,
    "rkgen": _cmd_rkgen,
    "reencrypt": _cmd_reencrypt,
    "decrypt": _cmd_decrypt,
    "transform-keygen": _cmd_transform_keygen,
    "transform": _cmd_transform,
    "finish": _cmd_finish,
}


def run(argv) -> int:
    """Dispatch one invocation and map failures to the exit-code contract."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "policy":
            return _cmd_policy_check(args)
        return _HANDLERS[args.command](args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except PolicySyntaxError as exc:
        print(f"abpre: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PolicyNotSatisfied as exc:
        print(f"abpre: error: policy not satisfied: {exc}", file=sys.stderr)
        return EXIT_POLICY
    except ReencryptionDisabled as exc:
        print(f"abpre: error: re-encryption disabled: {exc}", file=sys.stderr)
        return EXIT_POLICY
    except UnknownAttribute as exc:
        print(f"abpre: error: unknown attribute: {exc}", file=sys.stderr)
        return EXIT_POLICY
    except (FormatError, BackendMismatch, OSError) as exc:
        print(f"abpre: error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (NonPrimeModulus, UnsupportedCurve, ValueError) as exc:
        print(f"abpre: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AbpreError as exc:
        print(f"abpre: error: {exc}", file=sys.stderr)
        return EXIT_FORMAT


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
