"""Exception hierarchy.

Three base classes mirror the CLI exit codes: input errors (2),
precondition errors (3) and consistency errors (4).
"""


class KnotposError(Exception):
    pass


class InputError(KnotposError, ValueError):
    """Text or records that do not parse or validate."""


class PreconditionError(KnotposError, ValueError):
    """A well-formed input that an operation is not defined on."""


class ConsistencyError(KnotposError):
    """Numbers that contradict a proved identity or inequality."""


class MalformedBraid(InputError):
    pass


class GeneratorOutOfRange(InputError):
    pass


class MalformedPD(InputError):
    pass


class ArcDegreeError(InputError):
    pass


class OrientationInconsistent(InputError):
    pass


class SchemaError(InputError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class DuplicateName(SchemaError):
    pass


class EmptySelection(PreconditionError):
    pass


class UnknownComponent(PreconditionError):
    pass


class InvalidPartition(PreconditionError):
    pass


class NotPure(PreconditionError):
    pass


class NotAlternating(PreconditionError):
    pass


class NotPositiveDiagram(PreconditionError):
    pass


class NotPositive(PreconditionError):
    pass


class MissingInput(PreconditionError):
    pass


class ParityError(PreconditionError):
    pass


class UnknownExample(PreconditionError):
    pass


class BadParameter(PreconditionError):
    pass


class OddMixedCount(ConsistencyError):
    pass


class FormulaInconsistency(ConsistencyError):
    pass


class ChainViolation(ConsistencyError):
    pass
