"""Exception types shared across the workbench."""


class WorkbenchError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(WorkbenchError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class ValidationError(WorkbenchError):
    """Program is syntactically valid but violates a static rule."""


class RuntimeFault(WorkbenchError):
    """Interpreter error, tagged with the offending node."""

    def __init__(self, message: str, node_id: int):
        super().__init__(f"{message} (node {node_id})")
        self.message = message
        self.node_id = node_id


class CampaignError(WorkbenchError):
    """A run inside a measurement campaign failed."""

    def __init__(self, config_index: int, cause: Exception):
        super().__init__(f"config #{config_index}: {cause}")
        self.config_index = config_index
        self.cause = cause


class SpaceTooLarge(WorkbenchError):
    def __init__(self, actual: int, limit: int):
        super().__init__(f"configuration space has {actual} points, limit is {limit}")
        self.actual = actual
        self.limit = limit


class IncompleteFactorial(WorkbenchError):
    def __init__(self, missing: int):
        super().__init__(f"{missing} configurations missing from full factorial")
        self.missing = missing


class DuplicateConfig(WorkbenchError):
    pass


class DegenerateDesign(WorkbenchError):
    pass


class UnknownOption(WorkbenchError):
    pass


class InconsistentModels(WorkbenchError):
    pass


class UnknownNode(WorkbenchError):
    pass


class UnknownConfig(WorkbenchError):
    """A named configuration is not defined in the workspace."""


class StaleStore(WorkbenchError):
    """Stored measurements reference a different program content hash."""


class MissingPrerequisite(WorkbenchError):
    """A CLI command was run before the artifacts it needs exist."""

    def __init__(self, message: str, hint: str):
        super().__init__(f"{message} ({hint})")
        self.hint = hint
