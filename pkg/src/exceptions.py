from typing import ClassVar

EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_VIOLATION = 4


class SpecboundError(Exception):
    exit_code: ClassVar[int] = 1


class InvalidInputError(SpecboundError):
    exit_code = EXIT_USAGE

    def __init__(self, reason: str) -> None:
        super().__init__(f"Invalid input: {reason}")


class DimensionMismatchError(InvalidInputError):
    def __init__(self, left: tuple[int, ...], right: tuple[int, ...], expected: str) -> None:
        super().__init__(f"shapes {left} and {right} do not match ({expected})")


class EmptyDatasetError(InvalidInputError):
    def __init__(self) -> None:
        super().__init__("dataset contains no matrices")


class InvalidParameterError(SpecboundError):
    exit_code = EXIT_USAGE

    def __init__(self, name: str, value: object, expected: str) -> None:
        super().__init__(f"Invalid parameter '{name}' = {value!r}: expected {expected}")


class UnsupportedFunctionError(SpecboundError):
    exit_code = EXIT_USAGE

    def __init__(self, label: str, reason: str) -> None:
        super().__init__(f"Unsupported function '{label}': {reason}")


class ParseError(SpecboundError):
    exit_code = EXIT_USAGE

    def __init__(self, line_number: int, reason: str) -> None:
        super().__init__(f"Parse error at line {line_number}: {reason}")
        self.line_number = line_number


class NotSymmetricError(SpecboundError):
    exit_code = EXIT_USAGE

    def __init__(self, asymmetry: float, tolerance: float) -> None:
        super().__init__(
            f"Matrix is not symmetric: max |S - S^T| = {asymmetry:.3e} exceeds {tolerance:.3e}"
        )


class NotPositiveDefiniteError(SpecboundError):
    exit_code = EXIT_DOMAIN

    def __init__(self, smallest_eigenvalue: float, threshold: float) -> None:
        super().__init__(
            f"Matrix is not positive definite: smallest eigenvalue {smallest_eigenvalue:.6e} "
            f"is not above {threshold:.6e}"
        )


class RankDeficientError(SpecboundError):
    exit_code = EXIT_DOMAIN

    def __init__(self, smallest_singular_value: float, tolerance: float) -> None:
        super().__init__(
            f"Matrix is rank deficient: smallest singular value {smallest_singular_value:.6e} "
            f"is not above the rank tolerance {tolerance:.6e}"
        )


class DomainError(SpecboundError):
    exit_code = EXIT_DOMAIN

    def __init__(self, label: str, index: int | None, value: float, reason: str = "") -> None:
        location = f" at index {index}" if index is not None else ""
        detail = f" ({reason})" if reason else ""
        super().__init__(f"Value {value!r}{location} is outside the domain of '{label}'{detail}")
        self.label = label
        self.index = index
        self.value = value


class PropertyViolationError(SpecboundError):
    exit_code = EXIT_VIOLATION

    def __init__(self, property_name: str, detail: str) -> None:
        super().__init__(f"Property '{property_name}' violated: {detail}")
        self.property_name = property_name
