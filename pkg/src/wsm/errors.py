"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures onto its
stable exit-status contract (2 I/O, 3 validation/model, 4 unknown concept,
5 no answer).
"""


class WSMError(Exception):
    exit_code = 3


class InvalidVocabularyError(WSMError, ValueError):
    pass


class InvalidContentError(WSMError, ValueError):
    pass


class InvalidEdgeError(WSMError, ValueError):
    pass


class InvalidParameterError(WSMError, ValueError):
    pass


class InvalidInputError(WSMError, ValueError):
    pass


class EmptyModelError(WSMError, ValueError):
    pass


class SearchTooLargeError(WSMError):
    pass


class StuckError(WSMError):
    pass


class UnknownConceptError(WSMError, KeyError):
    exit_code = 4

    def __init__(self, unknown):
        if isinstance(unknown, (str, int)):
            unknown = [unknown]
        self.unknown = list(unknown)
        super().__init__("unknown concept(s): " + ", ".join(str(u) for u in self.unknown))

    def __str__(self):
        return self.args[0]


class ParseError(WSMError, ValueError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class NoAnswerError(WSMError):
    exit_code = 5

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best
