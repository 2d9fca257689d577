from .constants import *


class GradedevError(Exception):
    exit_code = EXIT_NUMERIC


class SchemaError(GradedevError, ValueError):
    exit_code = EXIT_SCHEMA


class ValidationError(GradedevError, ValueError):
    exit_code = EXIT_NUMERIC


class SizeCapError(GradedevError, ValueError):
    exit_code = EXIT_NUMERIC


class UnsupportedEventError(GradedevError, ValueError):
    exit_code = EXIT_NUMERIC


class OutOfRangeError(GradedevError, ValueError):
    exit_code = EXIT_NUMERIC


class FlowError(GradedevError, ArithmeticError):
    exit_code = EXIT_NUMERIC


class DegenerateConstraintError(GradedevError, ArithmeticError):
    exit_code = EXIT_NUMERIC


class InfeasibleConstraintsError(GradedevError):
    exit_code = EXIT_INFEASIBLE


class InsufficientDataError(GradedevError):
    exit_code = EXIT_INFEASIBLE


def check_option(name, value, options):
    """Raise a SchemaError listing the valid options when value is not one of them."""
    if value not in set(options):
        raise SchemaError(f"Invalid {name}: {value}. Options: {', '.join(map(str, options))}.")
    return value
