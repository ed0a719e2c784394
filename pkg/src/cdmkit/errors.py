class ToolkitError(Exception):
    """A computation could not be carried out (bad preconditions, singular solve, ...)."""


class ModelFormatError(ToolkitError):
    """A model or controller document violates its schema; message names the field path."""
