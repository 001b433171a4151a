"""Exception types shared across the package."""


class NetworkError(ValueError):
    """A network violates a structural invariant."""


class NetworkFormatError(NetworkError):
    """Malformed network text; carries the offending line number."""

    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class NotPositiveDefinite(ArithmeticError):
    """Cholesky factorization hit a non-positive pivot."""


class InteriorNotGrounded(RuntimeError):
    """Some interior component has no boundary vertex; the interior
    block is singular and the DtN map is undefined."""


class RankDeficient(RuntimeError):
    """Numerical or exact rank fell short of the column count.

    `rank` is the achieved rank; `columns` the free/unresolved column
    (or edge id) set.
    """

    def __init__(self, rank, columns):
        super().__init__(f"rank {rank}, unresolved columns {sorted(columns)}")
        self.rank = rank
        self.columns = tuple(sorted(columns))


class ExpansionMismatch(RuntimeError):
    """Disjoint-path expansion disagrees with the LU determinant;
    signals an enumeration or sign bug and is never swallowed."""


class TooManySystems(RuntimeError):
    """Path-system enumeration exceeded the configured cap."""


class AllRowsDegenerate(RuntimeError):
    """Every candidate log-linear row was dropped (zero determinant or
    sign mismatch)."""


class NotSparseDifference(ValueError):
    """Row difference left the {-1, 0, 1} coefficient alphabet."""


class RoundTripFailure(RuntimeError):
    """Recovered conductivities do not reproduce the given DtN map."""

    def __init__(self, roundtrip_error, threshold):
        super().__init__(
            f"roundtrip error {roundtrip_error:.3e} exceeds {threshold:.3e}"
        )
        self.roundtrip_error = roundtrip_error
        self.threshold = threshold


class InconsistentDataWarning(UserWarning):
    """Least-squares residual too large for exact DtN data."""
