"""Exception types shared across the package."""


class CodingError(Exception):
    """Base class for every error raised by this package."""


class SumNotOneError(CodingError):
    """Source probabilities do not sum to exactly one."""


class NonPositiveError(CodingError):
    """A source probability is zero or negative."""


class TooSmallError(CodingError):
    """The alphabet has fewer than two symbols."""


class UnknownSymbolError(CodingError):
    """A word or input stream refers to a symbol outside the alphabet."""


class FirstSymbolBelowTypeError(CodingError):
    """A nonempty word conditioned on type i must start at symbol i or later."""


class TypeMismatchError(CodingError):
    """Tree types handed to an operation do not fit its contract."""


class InvalidTreeError(CodingError):
    """A parse tree failed structural validation.

    Carries the list of rule violations in ``violations``.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid parse tree: {lines}")


class InfeasibleTypeError(CodingError):
    """No tree of the requested type and size exists under the restriction."""

    def __init__(self, type_index, size, restriction=None):
        self.type_index = type_index
        self.size = size
        self.restriction = restriction
        extra = "" if restriction is None else f" under restriction {sorted(restriction)}"
        super().__init__(
            f"no feasible type-{type_index} tree with {size} codewords{extra}"
        )


class SingularSystemError(CodingError):
    """An exact linear system has no unique solution."""


class CycleDetectedError(CodingError):
    """The iterative solver revisited a chain without certifying optimality."""

    def __init__(self, trace):
        self.trace = list(trace)
        super().__init__(f"solver revisited a chain after {len(self.trace)} steps")


class IterationCapError(CodingError):
    """A solver exceeded its iteration budget."""

    def __init__(self, cap, trace=None):
        self.cap = cap
        self.trace = list(trace or [])
        super().__init__(f"solver exceeded the iteration cap of {cap}")


class LpUnboundedError(CodingError):
    """The cutting-plane relaxation became unbounded (internal error)."""


class TooLargeError(CodingError):
    """Brute-force enumeration would exceed its safety guard."""


class HeaderMismatchError(CodingError):
    """A bitstream header does not match the supplied code system."""


class IndexOutOfRangeError(CodingError):
    """A decoded codeword index exceeds the dictionary size."""


class TruncatedStreamError(CodingError):
    """A bitstream ended before the promised symbol count was recovered."""


class CodeFileError(CodingError):
    """A stored code-system file is malformed or internally inconsistent."""


class ProbabilityFileError(CodingError):
    """A probability file is malformed."""


class ConsistencyError(CodingError):
    """An internal cross-check failed; indicates a bug, not bad input."""
