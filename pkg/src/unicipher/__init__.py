"""Unimodular 2x2 matrix block ciphers with error detection and correction."""

from .attacks import (
    EncryptionOracle,
    GoldenAttackResult,
    KGoldenAttackResult,
    ParamBox,
    ResistanceStats,
    attack_golden,
    attack_k_golden,
    measure_unimodular_resistance,
)
from .cipher import (
    Alphabet,
    CipherKey,
    CipherPackage,
    ColumnRatioCheck,
    PlaintextMatrix,
    VerifyResult,
    VerifyStatus,
    decode_text,
    decrypt,
    decrypt_message,
    encode_text,
    encrypt,
    encrypt_message,
    verify_package,
)
from .correction import (
    CorrectionContext,
    CorrectionReport,
    DiophantineFamily,
    ErrorClass,
    SearchConfig,
    correct,
    correct_column,
    correct_diagonal,
    correct_row,
    correct_single,
    plaintext_bounds,
    solve_linear_diophantine,
)
from .errors import (
    CipherError,
    ComplexFixedPoints,
    DegenerateConvergenceWarning,
    DivisionByZeroInOrbit,
    FormatError,
    InvalidKey,
    NegativePlaintext,
    NoDiophantineSolution,
    NoMatchInBounds,
    NonIntegralPlaintext,
    NotGoldenOracle,
    SingularMatrix,
    UnknownSymbol,
    ZeroDenominator,
    ZeroSequenceEntry,
)
from .matrix import (
    DEFAULT_MAX_EXPONENT,
    CodingMatrix,
    KeyMatrix,
    Mat2,
    PowerForm,
    SeedPair,
    build_coding_matrix,
    classify_power_form,
    golden_matrix,
    k_golden_matrix,
    mu_of_seed,
    s_matrix,
)
from .ratios import (
    BOTTOM_OVER_TOP,
    TOP_OVER_BOTTOM,
    ColumnRatios,
    ConvergenceMode,
    ConvergenceProfile,
    FixedPoints,
    RatioParams,
    column_ratio,
    convergence_profile,
    exponential_rate,
    fixed_points,
    ratio_iterate,
    round_half_even,
    row_ratio_interval,
)

__version__ = "0.1.0"
