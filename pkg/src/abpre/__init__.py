"""Ciphertext-policy attribute-based proxy re-encryption toolkit."""

from .errors import (
    AbpreError,
    AEADAuthenticationFailure,
    BackendMismatch,
    BadMagic,
    DuplicateAttribute,
    EmptyUniverse,
    FormatError,
    InvalidEncoding,
    NonPrimeModulus,
    PolicyNotSatisfied,
    PolicySyntaxError,
    ReencryptionDisabled,
    TruncatedField,
    TypeMismatch,
    UnknownAttribute,
    UnsupportedCurve,
    UnsupportedVersion,
    ZeroInverse,
)
from .groups import GroupSuite, Scalar, SourceElement, TargetElement, suite_new
from .policy import (
    AccessMatrix,
    And,
    Leaf,
    Or,
    PolicyAst,
    compile_lsss,
    eval_formula,
    format_policy,
    make_shares,
    parse_policy,
    satisfying_rows,
)
from .rng import RandomSource, SeededRandom, SystemRandom, TapeRandom
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
    decrypt_l1,
    decrypt_l2,
    encrypt,
    finish_decrypt,
    keygen,
    reencrypt,
    rkgen,
    setup,
    transform_apply,
    transform_keygen,
)
from .wire import (
    decode_object,
    derive_key,
    encode_object,
    finish_sealed,
    kem_wrap,
    open_sealed,
    reencrypt_sealed,
    seal,
    transform_sealed,
)

__version__ = "0.1.0"
