"""Exception hierarchy shared by every layer of the toolkit.

The CLI maps :class:`CheckFailure` subclasses to exit code 1 (a mathematical
check failed or a search came up empty) and :class:`InputError` subclasses to
exit code 2.
"""


class RankWitnessError(Exception):
    pass


class InputError(RankWitnessError, ValueError):
    """Bad arguments, catalog or cache problems."""


class CheckFailure(RankWitnessError):
    """A verification did not hold or a bounded search found nothing."""


# exact-arith
class ZeroInput(InputError):
    pass


class FactorizationIncomplete(RankWitnessError, ArithmeticError):
    pass


class FieldMismatch(InputError):
    pass


# curve-core
class BadReductionPrime(InputError):
    pass


class MissingPrime(InputError):
    def __init__(self, p):
        super().__init__(f"a_p missing for p={p}")
        self.p = p


class NotOnCurve(InputError):
    pass


# witness
class NonNegativeF(InputError):
    pass


class SquareF(InputError):
    pass


class SearchExhausted(CheckFailure):
    def __init__(self, bound, detail=""):
        msg = f"search exhausted at bound {bound}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.bound = bound


class CheckFailed(CheckFailure):
    def __init__(self, member, clause, detail=""):
        super().__init__(f"check ({clause}) failed for member {member} {detail}".rstrip())
        self.member = member
        self.clause = clause


# class-field
class BadDiscriminant(InputError):
    pass


class RatioMismatch(CheckFailure):
    def __init__(self, n, got, expected):
        super().__init__(f"ratio mismatch at n={n}: got {got}, expected {expected}")
        self.n = n
        self.got = got
        self.expected = expected


# heegner-analytic
class PrecisionUnreachable(CheckFailure):
    pass


class NoSquareRoot(InputError):
    pass


class RecognitionFailed(CheckFailure):
    pass


class ClassNumberNotOne(InputError):
    pass


class NotInert(InputError):
    pass


# recurrence
class ZeroSeed(InputError):
    pass


class HasseViolation(InputError):
    pass


# prime-search
class CMConditionFailed(InputError):
    pass
