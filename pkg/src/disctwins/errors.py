"""Typed error hierarchy shared by every module.

Each error carries a short machine-readable ``code`` so the CLI can map it to
an exit status and JSON payload without string matching.
"""


class DomainError(Exception):
    code = "domain-error"


class NotSquarefree(DomainError):
    code = "not-squarefree"


class DegenerateD(DomainError):
    code = "degenerate-d"


class FieldMismatch(DomainError):
    code = "field-mismatch"


class DivisionByZero(DomainError, ZeroDivisionError):
    code = "division-by-zero"


class InfiniteUnitGroup(DomainError):
    code = "infinite-unit-group"


class UnsupportedField(DomainError):
    code = "unsupported-field"


class ZeroElement(DomainError):
    code = "zero-element"


class Singular(DomainError):
    code = "singular"


class ZeroU(DomainError):
    code = "zero-u"


class NotShortForm(DomainError):
    code = "not-short-form"


class ZeroD(DomainError):
    code = "zero-d"


class NonIntegralUnfixable(DomainError):
    code = "non-integral-unfixable"


class ClassNumberNotOne(DomainError):
    code = "class-number-not-one"


class InvalidResidue(DomainError):
    code = "invalid-residue"


class IncompatiblePrimes(DomainError):
    code = "incompatible-primes"


class SingularParameter(DomainError):
    code = "singular-parameter"

    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class ZeroT(DomainError):
    code = "zero-t"


class BadPair(DomainError):
    code = "bad-pair"


class UnsupportedP(DomainError):
    code = "unsupported-p"
