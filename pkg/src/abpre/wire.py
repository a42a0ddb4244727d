"""Canonical binary serialization and the KEM-DEM file container.

Every key and ciphertext object encodes as a versioned wire object:

    magic "ABPRE1" | version 0x01 | backend id | object type | body

where the body is a fixed sequence of tag-length-value fields determined
by the object type (FORMAT.md documents every layout octet by octet).
Encoding is canonical: attribute sets are sorted, scalars are 32-byte
big-endian, matrix entries are reduced mod p, and decode(encode(x)) == x
with encode(decode(blob)) byte-identical to blob.

Sealed files wrap a random target-group element (the KEM) with the
scheme, derive an AES-256-GCM key from its canonical encoding via
HKDF-SHA-256, and authenticate the stable container fields plus the
carried C component as associated data.  The policy-dependent ciphertext
fields cannot be covered because a proxy legitimately rewrites them when
re-encrypting; tampering with them still fails, since decryption then
yields the wrong KEM element and the AEAD rejects the derived key.
"""

from __future__ import annotations

import struct

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM
from cryptography.hazmat.primitives.hashes import SHA256
from cryptography.hazmat.primitives.kdf.hkdf import HKDF

from .errors import (
    AEADAuthenticationFailure,
    BadMagic,
    BackendMismatch,
    InvalidEncoding,
    TruncatedField,
    TypeMismatch,
    UnsupportedVersion,
)
from .groups import GroupSuite, Scalar, suite_new
from .policy import AccessMatrix
from .rng import RandomSource
from . import scheme
from .scheme import (
    CiphertextL1,
    CiphertextL2,
    DelegateeKey,
    MasterKey,
    PartialDecryption,
    ProxyReKey,
    PublicParams,
    TransformKey,
    UserSecretKey,
)

MAGIC = b"ABPRE1"
VERSION = 0x01

BACKEND_BYTES = {"mock": 0x00, "pairing": 0x01}
BACKEND_NAMES = {v: k for k, v in BACKEND_BYTES.items()}

TYPE_PK = 0x01
TYPE_MSK = 0x02
TYPE_SK = 0x03
TYPE_RK_PROXY = 0x04
TYPE_RK_DELEGATEE = 0x05
TYPE_CT1 = 0x06
TYPE_CT2 = 0x07
TYPE_TK = 0x08
TYPE_PARTIAL = 0x09
TYPE_TRANSFORM_SECRET = 0x0A
TYPE_SEALED = 0x0B

_TYPE_NAMES = {
    TYPE_PK: "public params",
    TYPE_MSK: "master key",
    TYPE_SK: "user secret key",
    TYPE_RK_PROXY: "proxy re-key",
    TYPE_RK_DELEGATEE: "delegatee key",
    TYPE_CT1: "level-1 ciphertext",
    TYPE_CT2: "level-2 ciphertext",
    TYPE_TK: "transform key",
    TYPE_PARTIAL: "partial decryption",
    TYPE_TRANSFORM_SECRET: "transform secret",
    TYPE_SEALED: "sealed file",
}

# field tags
_F_SUITE = 0x01
_F_ATTRS = 0x02
_F_SCALAR = 0x03
_F_SRC = 0x04
_F_TGT = 0x05
_F_MAP = 0x06
_F_MATRIX = 0x07
_F_RHO = 0x08
_F_ROWS = 0x09
_F_FLAG = 0x0A
_F_NONCE = 0x0B
_F_PAYLOAD = 0x0C
_F_OBJECT = 0x0D

KDF_HKDF_SHA256 = 0x01
AEAD_AES256_GCM = 0x01


# ------------------------------------------------------------ primitives --


class _Writer:
    def __init__(self):
        self._parts = []

    def field(self, tag: int, value: bytes):
        self._parts.append(struct.pack(">BI", tag, len(value)) + value)

    def bytes(self) -> bytes:
        return b"".join(self._parts)


class _Reader:
    def __init__(self, data: bytes):
        self._data = data
        self._pos = 0

    def take(self, n: int) -> bytes:
        if self._pos + n > len(self._data):
            raise TruncatedField(
                f"needed {n} bytes at offset {self._pos}, have {len(self._data) - self._pos}"
            )
        out = self._data[self._pos : self._pos + n]
        self._pos += n
        return out

    def field(self, tag: int) -> bytes:
        got, length = struct.unpack(">BI", self.take(5))
        if got != tag:
            raise InvalidEncoding(f"expected field 0x{tag:02x}, found 0x{got:02x}")
        return self.take(length)

    def peek_tag(self):
        if self._pos + 1 > len(self._data):
            raise TruncatedField("no field tag left")
        return self._data[self._pos]

    def done(self):
        if self._pos != len(self._data):
            raise InvalidEncoding(
                f"{len(self._data) - self._pos} trailing bytes after last field"
            )


def _pack_str(s: str) -> bytes:
    raw = s.encode("utf-8")
    return struct.pack(">H", len(raw)) + raw


def _unpack_str(r: _Reader) -> str:
    (n,) = struct.unpack(">H", r.take(2))
    return r.take(n).decode("utf-8")


def _pack_attrs(attrs) -> bytes:
    out = struct.pack(">H", len(attrs))
    return out + b"".join(_pack_str(a) for a in attrs)


def _unpack_attrs(blob: bytes) -> list[str]:
    r = _Reader(blob)
    (n,) = struct.unpack(">H", r.take(2))
    attrs = [_unpack_str(r) for _ in range(n)]
    r.done()
    return attrs


def _pack_elt(raw: bytes) -> bytes:
    return struct.pack(">H", len(raw)) + raw


def _unpack_elt(r: _Reader) -> bytes:
    (n,) = struct.unpack(">H", r.take(2))
    return r.take(n)


def _pack_scalar(s: Scalar) -> bytes:
    return s.value.to_bytes(32, "big")


def _unpack_scalar(blob: bytes, suite: GroupSuite) -> Scalar:
    if len(blob) != 32:
        raise InvalidEncoding("scalar field must be 32 bytes")
    v = int.from_bytes(blob, "big")
    if v >= suite.order:
        raise InvalidEncoding("scalar not reduced mod group order")
    return Scalar(v, suite.order)


def _pack_suite(suite: GroupSuite) -> bytes:
    if suite.backend_id == "mock":
        p = suite.params["p"]
        g2e = suite.params["g2_exponent"]
        return p.to_bytes(32, "big") + g2e.to_bytes(32, "big")
    return _pack_str(suite.params["curve"])


def _unpack_suite(blob: bytes, backend: str) -> GroupSuite:
    if backend == "mock":
        if len(blob) != 64:
            raise InvalidEncoding("mock suite field must be 64 bytes")
        p = int.from_bytes(blob[:32], "big")
        g2e = int.from_bytes(blob[32:], "big")
        return suite_new("mock", p=p, g2_exponent=g2e)
    r = _Reader(blob)
    curve = _unpack_str(r)
    r.done()
    return suite_new("pairing", curve=curve)


def _pack_map(suite: GroupSuite, mapping: dict) -> bytes:
    out = struct.pack(">H", len(mapping))
    for attr in sorted(mapping):
        out += _pack_str(attr) + _pack_elt(suite.encode_source(mapping[attr]))
    return out


def _unpack_map(blob: bytes, suite: GroupSuite) -> dict:
    r = _Reader(blob)
    (n,) = struct.unpack(">H", r.take(2))
    out = {}
    for _ in range(n):
        attr = _unpack_str(r)
        out[attr] = suite.decode_source(_unpack_elt(r))
    r.done()
    return out


def _pack_matrix(m: AccessMatrix, suite: GroupSuite) -> bytes:
    out = struct.pack(">HH", m.n_rows, m.n_cols)
    for row in m.rows:
        for e in row:
            out += (e % suite.order).to_bytes(32, "big")
    return out


def _unpack_matrix(blob: bytes, rho: tuple, suite: GroupSuite) -> AccessMatrix:
    r = _Reader(blob)
    n_rows, n_cols = struct.unpack(">HH", r.take(4))
    rows = []
    for _ in range(n_rows):
        row = []
        for _ in range(n_cols):
            v = int.from_bytes(r.take(32), "big")
            if v >= suite.order:
                raise InvalidEncoding("matrix entry not reduced mod group order")
            row.append(v)
        rows.append(tuple(row))
    r.done()
    if len(rho) != n_rows:
        raise InvalidEncoding("rho length differs from matrix row count")
    try:
        return AccessMatrix(tuple(rows), rho)
    except ValueError as exc:
        raise InvalidEncoding(str(exc)) from exc


def _pack_rows(suite: GroupSuite, rows) -> bytes:
    out = struct.pack(">H", len(rows))
    for c, d in rows:
        out += _pack_elt(suite.encode_source(c)) + _pack_elt(suite.encode_source(d))
    return out


def _unpack_rows(blob: bytes, suite: GroupSuite) -> tuple:
    r = _Reader(blob)
    (n,) = struct.unpack(">H", r.take(2))
    rows = []
    for _ in range(n):
        c = suite.decode_source(_unpack_elt(r))
        d = suite.decode_source(_unpack_elt(r))
        rows.append((c, d))
    r.done()
    return tuple(rows)


# ------------------------------------------------------------- encoding --


def _suite_of(obj) -> GroupSuite:
    if isinstance(obj, PublicParams):
        return obj.suite
    for el in (
        getattr(obj, "K", None),
        getattr(obj, "K_p", None),
        getattr(obj, "AK", None),
        getattr(obj, "C", None),
        getattr(obj, "T0_full", None),
        getattr(obj, "L_tk", None),
    ):
        if el is not None:
            return el.suite
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def object_type_of(obj) -> int:
    return {
        PublicParams: TYPE_PK,
        MasterKey: TYPE_MSK,
        UserSecretKey: TYPE_SK,
        ProxyReKey: TYPE_RK_PROXY,
        DelegateeKey: TYPE_RK_DELEGATEE,
        CiphertextL1: TYPE_CT1,
        CiphertextL2: TYPE_CT2,
        TransformKey: TYPE_TK,
        PartialDecryption: TYPE_PARTIAL,
        Scalar: TYPE_TRANSFORM_SECRET,
    }[type(obj)]


def encode_object(obj, suite: GroupSuite = None) -> bytes:
    """Serialize a key/ciphertext object to its canonical wire form."""
    if suite is None:
        if isinstance(obj, (MasterKey, Scalar)):
            raise TypeError(f"{type(obj).__name__} carries no elements; pass suite=")
        suite = _suite_of(obj)
    obj_type = object_type_of(obj)
    w = _Writer()
    w.field(_F_SUITE, _pack_suite(suite))
    enc_s = lambda el: _pack_elt(suite.encode_source(el))
    enc_t = lambda el: _pack_elt(suite.encode_target(el))

    if isinstance(obj, PublicParams):
        w.field(_F_ATTRS, _pack_attrs(obj.universe))
        w.field(_F_TGT, enc_t(obj.e_gg_alpha))
        w.field(_F_SRC, enc_s(obj.g_a))
        w.field(_F_MAP, _pack_map(suite, obj.h))
    elif isinstance(obj, MasterKey):
        w.field(_F_SCALAR, _pack_scalar(obj.alpha))
        w.field(_F_SCALAR, _pack_scalar(obj.a))
    elif isinstance(obj, UserSecretKey):
        w.field(_F_ATTRS, _pack_attrs(sorted(obj.attrs)))
        w.field(_F_SRC, enc_s(obj.K))
        w.field(_F_SRC, enc_s(obj.L))
        w.field(_F_MAP, _pack_map(suite, obj.K_x))
    elif isinstance(obj, ProxyReKey):
        w.field(_F_ATTRS, _pack_attrs(sorted(obj.delegator_attrs)))
        w.field(_F_SRC, enc_s(obj.K_p))
        w.field(_F_SRC, enc_s(obj.L_p))
        w.field(_F_MAP, _pack_map(suite, obj.K_px))
        w.field(_F_SCALAR, _pack_scalar(obj.rk_scalar))
    elif isinstance(obj, DelegateeKey):
        w.field(_F_ATTRS, _pack_attrs(sorted(obj.attrs)))
        w.field(_F_SRC, enc_s(obj.AK))
        w.field(_F_SRC, enc_s(obj.L_dd))
        w.field(_F_MAP, _pack_map(suite, obj.K_ddx))
    elif isinstance(obj, CiphertextL1):
        w.field(_F_MATRIX, _pack_matrix(obj.policy, suite))
        w.field(_F_RHO, _pack_attrs(obj.policy.rho))
        w.field(_F_TGT, enc_t(obj.C))
        w.field(_F_SRC, enc_s(obj.C_prime))
        w.field(_F_FLAG, b"\x01" if obj.C_hat is not None else b"\x00")
        if obj.C_hat is not None:
            w.field(_F_SRC, enc_s(obj.C_hat))
        w.field(_F_ROWS, _pack_rows(suite, obj.rows))
    elif isinstance(obj, CiphertextL2):
        w.field(_F_MATRIX, _pack_matrix(obj.policy2, suite))
        w.field(_F_RHO, _pack_attrs(obj.policy2.rho))
        w.field(_F_TGT, enc_t(obj.C))
        w.field(_F_TGT, enc_t(obj.T0))
        w.field(_F_SRC, enc_s(obj.P))
        w.field(_F_ROWS, _pack_rows(suite, obj.rows2))
    elif isinstance(obj, TransformKey):
        w.field(_F_ATTRS, _pack_attrs(sorted(obj.attrs)))
        w.field(_F_SRC, enc_s(obj.L_tk))
        w.field(_F_MAP, _pack_map(suite, obj.K_tkx))
        w.field(_F_SRC, enc_s(obj.AK))
    elif isinstance(obj, PartialDecryption):
        w.field(_F_TGT, enc_t(obj.T0_full))
        w.field(_F_TGT, enc_t(obj.T1))
    elif isinstance(obj, Scalar):
        w.field(_F_SCALAR, _pack_scalar(obj))
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")

    header = MAGIC + bytes([VERSION, BACKEND_BYTES[suite.backend_id], obj_type])
    return header + w.bytes()


def decode_object(data: bytes, expected_type: int = None, suite: GroupSuite = None):
    """Decode a wire object, optionally enforcing type and suite."""
    r = _Reader(data)
    if r.take(6) != MAGIC:
        raise BadMagic("not an ABPRE1 object")
    version = r.take(1)[0]
    if version != VERSION:
        raise UnsupportedVersion(f"wire version 0x{version:02x} not supported")
    backend_byte = r.take(1)[0]
    if backend_byte not in BACKEND_NAMES:
        raise InvalidEncoding(f"unknown backend id 0x{backend_byte:02x}")
    backend = BACKEND_NAMES[backend_byte]
    obj_type = r.take(1)[0]
    if expected_type is not None and obj_type != expected_type:
        raise TypeMismatch(
            f"expected {_TYPE_NAMES.get(expected_type, expected_type)}, "
            f"found {_TYPE_NAMES.get(obj_type, obj_type)}"
        )
    decoded_suite = _unpack_suite(r.field(_F_SUITE), backend) if obj_type != TYPE_SEALED else None
    if decoded_suite is not None:
        if decoded_suite.backend_id != backend:
            raise InvalidEncoding("suite field disagrees with header backend id")
        if suite is not None and decoded_suite is not suite:
            raise BackendMismatch("object belongs to a different suite")
        suite = decoded_suite

    if obj_type == TYPE_SEALED:
        obj = _decode_sealed_body(r)
        r.done()
        if obj.ct.C.suite.backend_id != backend:
            raise InvalidEncoding("embedded ciphertext disagrees with header backend id")
        if suite is not None and obj.ct.C.suite is not suite:
            raise BackendMismatch("sealed file belongs to a different suite")
        return obj

    dec_s = lambda blob: suite.decode_source(_unpack_elt(_Reader(blob)))
    dec_t = lambda blob: suite.decode_target(_unpack_elt(_Reader(blob)))

    if obj_type == TYPE_PK:
        universe = tuple(_unpack_attrs(r.field(_F_ATTRS)))
        e_gg_alpha = dec_t(r.field(_F_TGT))
        g_a = dec_s(r.field(_F_SRC))
        h = _unpack_map(r.field(_F_MAP), suite)
        if set(h) != set(universe):
            raise InvalidEncoding("h map keys differ from the universe")
        obj = PublicParams(suite, universe, e_gg_alpha, g_a, h)
    elif obj_type == TYPE_MSK:
        alpha = _unpack_scalar(r.field(_F_SCALAR), suite)
        a = _unpack_scalar(r.field(_F_SCALAR), suite)
        obj = MasterKey(alpha, a)
    elif obj_type == TYPE_SK:
        attrs = frozenset(_unpack_attrs(r.field(_F_ATTRS)))
        K = dec_s(r.field(_F_SRC))
        L = dec_s(r.field(_F_SRC))
        K_x = _unpack_map(r.field(_F_MAP), suite)
        if set(K_x) != attrs:
            raise InvalidEncoding("K_x map keys differ from the attribute set")
        obj = UserSecretKey(attrs, K, L, K_x)
    elif obj_type == TYPE_RK_PROXY:
        attrs = frozenset(_unpack_attrs(r.field(_F_ATTRS)))
        K_p = dec_s(r.field(_F_SRC))
        L_p = dec_s(r.field(_F_SRC))
        K_px = _unpack_map(r.field(_F_MAP), suite)
        rk_scalar = _unpack_scalar(r.field(_F_SCALAR), suite)
        if set(K_px) != attrs:
            raise InvalidEncoding("K_px map keys differ from the attribute set")
        obj = ProxyReKey(attrs, K_p, L_p, K_px, rk_scalar)
    elif obj_type == TYPE_RK_DELEGATEE:
        attrs = frozenset(_unpack_attrs(r.field(_F_ATTRS)))
        AK = dec_s(r.field(_F_SRC))
        L_dd = dec_s(r.field(_F_SRC))
        K_ddx = _unpack_map(r.field(_F_MAP), suite)
        if set(K_ddx) != attrs:
            raise InvalidEncoding("K_ddx map keys differ from the attribute set")
        obj = DelegateeKey(attrs, AK, L_dd, K_ddx)
    elif obj_type == TYPE_CT1:
        matrix_blob = r.field(_F_MATRIX)
        rho = tuple(_unpack_attrs(r.field(_F_RHO)))
        policy = _unpack_matrix(matrix_blob, rho, suite)
        C = dec_t(r.field(_F_TGT))
        C_prime = dec_s(r.field(_F_SRC))
        flag = r.field(_F_FLAG)
        if flag not in (b"\x00", b"\x01"):
            raise InvalidEncoding("re-encryptable flag must be 0x00 or 0x01")
        C_hat = dec_s(r.field(_F_SRC)) if flag == b"\x01" else None
        rows = _unpack_rows(r.field(_F_ROWS), suite)
        if len(rows) != policy.n_rows:
            raise InvalidEncoding("row count differs from matrix row count")
        obj = CiphertextL1(policy, C, C_prime, C_hat, rows)
    elif obj_type == TYPE_CT2:
        matrix_blob = r.field(_F_MATRIX)
        rho = tuple(_unpack_attrs(r.field(_F_RHO)))
        policy2 = _unpack_matrix(matrix_blob, rho, suite)
        C = dec_t(r.field(_F_TGT))
        T0 = dec_t(r.field(_F_TGT))
        P = dec_s(r.field(_F_SRC))
        rows2 = _unpack_rows(r.field(_F_ROWS), suite)
        if len(rows2) != policy2.n_rows:
            raise InvalidEncoding("row count differs from matrix row count")
        obj = CiphertextL2(policy2, C, T0, P, rows2)
    elif obj_type == TYPE_TK:
        attrs = frozenset(_unpack_attrs(r.field(_F_ATTRS)))
        L_tk = dec_s(r.field(_F_SRC))
        K_tkx = _unpack_map(r.field(_F_MAP), suite)
        AK = dec_s(r.field(_F_SRC))
        if set(K_tkx) != attrs:
            raise InvalidEncoding("K_tkx map keys differ from the attribute set")
        obj = TransformKey(attrs, L_tk, K_tkx, AK)
    elif obj_type == TYPE_PARTIAL:
        T0_full = dec_t(r.field(_F_TGT))
        T1 = dec_t(r.field(_F_TGT))
        obj = PartialDecryption(T0_full, T1)
    elif obj_type == TYPE_TRANSFORM_SECRET:
        obj = _unpack_scalar(r.field(_F_SCALAR), suite)
    else:
        raise InvalidEncoding(f"unknown object type 0x{obj_type:02x}")
    r.done()
    return obj


# --------------------------------------------------------------- KEM-DEM --


def derive_key(suite: GroupSuite, element) -> bytes:
    """Payload key = HKDF-SHA-256 over the canonical element encoding."""
    return HKDF(
        algorithm=SHA256(), length=32, salt=None, info=b"abpre/kem/v1"
    ).derive(suite.encode_target(element))


def kem_wrap(
    pp: PublicParams, policy: AccessMatrix, reencryptable: bool, rng: RandomSource
):
    """Fresh random target element encrypted under the policy."""
    element = pp.suite.random_target(rng)
    return element, scheme.encrypt(pp, element, policy, reencryptable, rng)


class SealedFile:
    """Decoded form of a sealed container: embedded KEM ciphertext + AEAD."""

    def __init__(self, kdf_id, aead_id, nonce, ct, payload, backend_byte):
        self.kdf_id = kdf_id
        self.aead_id = aead_id
        self.nonce = nonce
        self.ct = ct  # CiphertextL1 or CiphertextL2
        self.payload = payload
        self._backend_byte = backend_byte

    def associated_data(self, suite: GroupSuite) -> bytes:
        return (
            MAGIC
            + bytes([VERSION, self._backend_byte, TYPE_SEALED, self.kdf_id, self.aead_id])
            + self.nonce
            + suite.encode_target(self.ct.C)
        )


def _decode_sealed_body(r: _Reader) -> SealedFile:
    kdf_id = r.field(_F_FLAG)[0]
    aead_id = r.field(_F_FLAG)[0]
    if kdf_id != KDF_HKDF_SHA256:
        raise InvalidEncoding(f"unknown KDF id 0x{kdf_id:02x}")
    if aead_id != AEAD_AES256_GCM:
        raise InvalidEncoding(f"unknown AEAD id 0x{aead_id:02x}")
    nonce = r.field(_F_NONCE)
    if len(nonce) != 12:
        raise InvalidEncoding("AES-GCM nonce must be 12 bytes")
    ct_blob = r.field(_F_OBJECT)
    ct = decode_object(ct_blob)
    if not isinstance(ct, (CiphertextL1, CiphertextL2)):
        raise TypeMismatch("sealed container must embed a ciphertext")
    payload = r.field(_F_PAYLOAD)
    backend_byte = BACKEND_BYTES[ct.C.suite.backend_id]
    return SealedFile(kdf_id, aead_id, nonce, ct, payload, backend_byte)


def _encode_sealed(suite: GroupSuite, nonce: bytes, ct, payload: bytes) -> bytes:
    w = _Writer()
    w.field(_F_FLAG, bytes([KDF_HKDF_SHA256]))
    w.field(_F_FLAG, bytes([AEAD_AES256_GCM]))
    w.field(_F_NONCE, nonce)
    w.field(_F_OBJECT, encode_object(ct))
    w.field(_F_PAYLOAD, payload)
    header = MAGIC + bytes([VERSION, BACKEND_BYTES[suite.backend_id], TYPE_SEALED])
    return header + w.bytes()


def seal(
    pp: PublicParams,
    policy: AccessMatrix,
    payload: bytes,
    rng: RandomSource,
    reencryptable: bool = True,
) -> bytes:
    """Encrypt an arbitrary payload to holders of policy-satisfying keys."""
    suite = pp.suite
    element, ct = kem_wrap(pp, policy, reencryptable, rng)
    nonce = rng.tokens(12)
    sealed = SealedFile(
        KDF_HKDF_SHA256, AEAD_AES256_GCM, nonce, ct, b"", BACKEND_BYTES[suite.backend_id]
    )
    aead = AESGCM(derive_key(suite, element))
    blob = aead.encrypt(nonce, payload, sealed.associated_data(suite))
    return _encode_sealed(suite, nonce, ct, blob)


def _open_with_element(suite: GroupSuite, sealed: SealedFile, element) -> bytes:
    aead = AESGCM(derive_key(suite, element))
    try:
        return aead.decrypt(sealed.nonce, sealed.payload, sealed.associated_data(suite))
    except InvalidTag as exc:
        raise AEADAuthenticationFailure("sealed payload failed authentication") from exc


def open_sealed(pp: PublicParams, key, data: bytes) -> bytes:
    """Open a sealed file with a UserSecretKey (CT1) or DelegateeKey (CT2).

    Policy failures surface before any AEAD work is attempted.
    """
    sealed = decode_object(data, TYPE_SEALED, suite=pp.suite)
    if isinstance(key, UserSecretKey):
        if not isinstance(sealed.ct, CiphertextL1):
            raise TypeMismatch("user secret key cannot open a re-encrypted file")
        element = scheme.decrypt_l1(pp, key, sealed.ct)
    elif isinstance(key, DelegateeKey):
        if not isinstance(sealed.ct, CiphertextL2):
            raise TypeMismatch("delegatee key cannot open a first-level file")
        element = scheme.decrypt_l2(pp, key, sealed.ct)
    else:
        raise TypeError(f"cannot open sealed file with {type(key).__name__}")
    return _open_with_element(pp.suite, sealed, element)


def reencrypt_sealed(
    pp: PublicParams,
    rk: ProxyReKey,
    data: bytes,
    policy2: AccessMatrix,
    rng: RandomSource,
) -> bytes:
    """Proxy transformation of a sealed file; the payload travels unchanged."""
    sealed = decode_object(data, TYPE_SEALED, suite=pp.suite)
    if not isinstance(sealed.ct, CiphertextL1):
        raise TypeMismatch("only first-level sealed files can be re-encrypted")
    ct2 = scheme.reencrypt(pp, rk, sealed.ct, policy2, rng)
    return _encode_sealed(pp.suite, sealed.nonce, ct2, sealed.payload)


def transform_sealed(pp: PublicParams, tk: TransformKey, data: bytes) -> PartialDecryption:
    """Outsourced pairing work over the sealed file's embedded CT2."""
    sealed = decode_object(data, TYPE_SEALED, suite=pp.suite)
    if not isinstance(sealed.ct, CiphertextL2):
        raise TypeMismatch("transform expects a re-encrypted sealed file")
    return scheme.transform_apply(pp, tk, sealed.ct)


def finish_sealed(z: Scalar, pd: PartialDecryption, data: bytes) -> bytes:
    """Unblind a partial decryption and open the sealed payload.

    Needs no public params: the sealed file names its own suite.
    """
    sealed = decode_object(data, TYPE_SEALED)
    element = scheme.finish_decrypt(z, sealed.ct.C, pd)
    return _open_with_element(sealed.ct.C.suite, sealed, element)
