"""
Error Handling and Diagnostics
Exception hierarchy for model loading, execution and checking, plus a
central handler that logs, counts and maps errors to exit codes
"""

import sys
import time
from typing import Optional, Dict, Any, List, Sequence
from enum import Enum
from dataclasses import dataclass, field
from colorama import Fore, init

init(autoreset=True)

# Exit-code contract shared with main.py
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class ErrorType(Enum):
    """Types of errors the system can encounter"""
    SYNTAX_ERROR = "syntax_error"                    # Text does not match the grammar
    UNDECLARED_AGENT = "undeclared_agent"            # Name not in the agents list
    DUPLICATE_DECLARATION = "duplicate_declaration"  # Agent or state declared twice
    DUPLICATE_ASSIGNMENT = "duplicate_assignment"    # Agent assigned twice in one state
    MALFORMED_TERM = "malformed_term"                # Capability or action label ill-formed
    STATE_INVALID = "state_invalid"                  # Initial state fails validation
    SHARED_OCCURRENCE = "shared_occurrence"
    SELF_OCCURRENCE = "self_occurrence"
    PARTIAL_ASSIGNMENT = "partial_assignment"
    NOT_EXECUTABLE = "not_executable"
    AMBIGUOUS_REDEX = "ambiguous_redex"              # Warning only
    BUDGET_EXCEEDED = "budget_exceeded"
    HISTORY_NOT_IN_UNIVERSE = "history_not_in_universe"
    DEPTH_INSUFFICIENT = "depth_insufficient"
    CONFIG_ERROR = "config_error"
    IO_ERROR = "io_error"
    UNKNOWN_ERROR = "unknown_error"                  # Catch-all


class ErrorSeverity(Enum):
    """Severity levels for errors"""
    LOW = "low"            # Diagnostic, result still usable
    MEDIUM = "medium"      # Input rejected
    HIGH = "high"          # Run aborted
    CRITICAL = "critical"  # Internal failure


@dataclass
class ErrorContext:
    """Context information about an error"""
    error_type: ErrorType
    severity: ErrorSeverity
    message: str
    details: Dict[str, Any] = field(default_factory=dict)
    location: Optional[str] = None


class PadelError(Exception):
    """Base class for every documented error"""

    error_type = ErrorType.UNKNOWN_ERROR
    severity = ErrorSeverity.HIGH
    exit_code = EXIT_FAILURE

    def __init__(self, message: str, location: Optional[str] = None, **details: Any):
        super().__init__(message)
        self.context = ErrorContext(
            error_type=self.error_type,
            severity=self.severity,
            message=message,
            details=details,
            location=location,
        )

    @property
    def message(self) -> str:
        return self.context.message


class PadelSyntaxError(PadelError):
    """Parse failure with position and expected tokens"""

    error_type = ErrorType.SYNTAX_ERROR
    severity = ErrorSeverity.MEDIUM
    exit_code = EXIT_USAGE

    def __init__(self, message: str, line: Optional[int] = None,
                 column: Optional[int] = None, expected: Sequence[str] = ()):
        location = f"line {line}, column {column}" if line is not None else None
        super().__init__(message, location=location, line=line, column=column,
                         expected=sorted(expected))
        self.line = line
        self.column = column
        self.expected = sorted(expected)


class UndeclaredAgent(PadelError):
    error_type = ErrorType.UNDECLARED_AGENT
    severity = ErrorSeverity.MEDIUM
    exit_code = EXIT_USAGE

    def __init__(self, agent: str, where: str = ""):
        suffix = f" in {where}" if where else ""
        super().__init__(f"Agent '{agent}' is not declared{suffix}", agent=agent)
        self.agent = agent


class DuplicateDeclaration(PadelError):
    error_type = ErrorType.DUPLICATE_DECLARATION
    severity = ErrorSeverity.MEDIUM
    exit_code = EXIT_USAGE

    def __init__(self, name: str, what: str = "agent"):
        super().__init__(f"Duplicate {what} declaration '{name}'", name=name, what=what)
        self.name = name


class DuplicateAssignment(PadelError):
    error_type = ErrorType.DUPLICATE_ASSIGNMENT
    severity = ErrorSeverity.MEDIUM
    exit_code = EXIT_USAGE

    def __init__(self, agent: str, state: str):
        super().__init__(f"Agent '{agent}' assigned twice in state '{state}'",
                         agent=agent, state=state)
        self.agent = agent
        self.state = state


class MalformedTerm(PadelError):
    """Capability payload or action label violates its well-formedness rules"""

    error_type = ErrorType.MALFORMED_TERM
    severity = ErrorSeverity.MEDIUM
    exit_code = EXIT_USAGE


class StateError(PadelError):
    """Violation of the state constraint"""

    error_type = ErrorType.STATE_INVALID
    severity = ErrorSeverity.MEDIUM
    exit_code = EXIT_FAILURE


class SharedOccurrence(StateError):
    error_type = ErrorType.SHARED_OCCURRENCE

    def __init__(self, agent: str, first: str, second: str):
        if first == second:
            message = f"Agent '{agent}' occurs twice in the process of '{first}'"
        else:
            message = f"Agent '{agent}' occurs in the processes of both '{first}' and '{second}'"
        super().__init__(message, agent=agent, owners=[first, second])
        self.agent = agent
        self.owners = (first, second)


class SelfOccurrence(StateError):
    error_type = ErrorType.SELF_OCCURRENCE

    def __init__(self, agent: str, chain: List[str]):
        path = " -> ".join(chain)
        super().__init__(f"Agent '{agent}' occurs inside its own process ({path})",
                         agent=agent, chain=list(chain))
        self.agent = agent
        self.chain = list(chain)


class PartialAssignment(StateError):
    error_type = ErrorType.PARTIAL_ASSIGNMENT

    def __init__(self, missing: List[str]):
        super().__init__(f"No process assigned to: {', '.join(missing)}", missing=list(missing))
        self.missing = list(missing)


class StateInvalidity(StateError):
    """Wraps a validation failure with the name of the offending state"""

    def __init__(self, state: str, cause: StateError):
        super().__init__(f"State '{state}' is invalid: {cause.message}",
                         state=state, cause=cause.context.error_type.value)
        self.state = state
        self.cause = cause


class NotExecutable(PadelError):
    error_type = ErrorType.NOT_EXECUTABLE
    severity = ErrorSeverity.MEDIUM
    exit_code = EXIT_FAILURE

    def __init__(self, action: str):
        super().__init__(f"Action {action} is not executable here", action=action)
        self.action = action


class BudgetExceeded(PadelError):
    error_type = ErrorType.BUDGET_EXCEEDED
    severity = ErrorSeverity.HIGH
    exit_code = EXIT_BUDGET


class HistoryNotInUniverse(PadelError):
    error_type = ErrorType.HISTORY_NOT_IN_UNIVERSE
    severity = ErrorSeverity.MEDIUM
    exit_code = EXIT_USAGE


class DepthInsufficient(PadelError):
    error_type = ErrorType.DEPTH_INSUFFICIENT
    severity = ErrorSeverity.MEDIUM
    exit_code = EXIT_FAILURE


class ConfigError(PadelError):
    error_type = ErrorType.CONFIG_ERROR
    severity = ErrorSeverity.MEDIUM
    exit_code = EXIT_USAGE


class ErrorHandler:
    """Centralized error logging and exit-code mapping"""

    def __init__(self, verbose: bool = False, stream=None):
        """
        Initialize error handler

        Args:
            verbose: Print details for every error and warning
            stream: Output stream (stderr by default)
        """
        self.verbose = verbose
        self.stream = stream or sys.stderr
        self.error_counts: Dict[ErrorType, int] = {}
        self.last_error_time: Dict[ErrorType, float] = {}
        self.warnings: List[ErrorContext] = []

        if verbose:
            print(f"{Fore.GREEN}✓ Error Handler initialized", file=self.stream)

    def handle_error(self, error: Exception) -> int:
        """
        Log an error and return the exit code for it

        Args:
            error: Raised exception

        Returns:
            Process exit code
        """
        if isinstance(error, PadelError):
            context = error.context
            exit_code = error.exit_code
        elif isinstance(error, OSError):
            context = ErrorContext(ErrorType.IO_ERROR, ErrorSeverity.MEDIUM, str(error))
            exit_code = EXIT_USAGE
        else:
            context = ErrorContext(ErrorType.UNKNOWN_ERROR, ErrorSeverity.CRITICAL,
                                   f"{type(error).__name__}: {error}")
            exit_code = EXIT_FAILURE

        self._log_error(context)
        self._track_error(context.error_type)
        return exit_code

    def warn(self, context: ErrorContext):
        """Record a non-fatal diagnostic"""
        self.warnings.append(context)
        self._track_error(context.error_type)
        self._log_error(context)

    def _track_error(self, error_type: ErrorType):
        """Track error occurrence for the run summary"""
        if error_type not in self.error_counts:
            self.error_counts[error_type] = 0

        self.error_counts[error_type] += 1
        self.last_error_time[error_type] = time.time()

    def _log_error(self, context: ErrorContext):
        """Log error details"""
        severity_colors = {
            ErrorSeverity.LOW: Fore.YELLOW,
            ErrorSeverity.MEDIUM: Fore.RED,
            ErrorSeverity.HIGH: Fore.RED,
            ErrorSeverity.CRITICAL: Fore.RED
        }

        color = severity_colors.get(context.severity, Fore.YELLOW)
        label = "WARNING" if context.severity == ErrorSeverity.LOW else "ERROR"
        print(f"{color}[{label}] {context.error_type.value}: {context.message}", file=self.stream)
        if context.location:
            print(f"{color}  At: {context.location}", file=self.stream)
        if self.verbose:
            for key, value in context.details.items():
                print(f"{color}  {key}: {value}", file=self.stream)

    def get_error_stats(self) -> Dict[str, Any]:
        """Get error statistics"""
        return {
            "total_errors": sum(self.error_counts.values()),
            "by_type": {k.value: v for k, v in self.error_counts.items()},
            "warnings": len(self.warnings),
        }
