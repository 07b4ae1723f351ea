"""Exception types shared across the toolkit."""


class DataError(ValueError):
    """Malformed or inconsistent input data.

    ``source``, ``line`` and ``qid`` are filled in when known so that the CLI
    can point at the offending record.
    """

    def __init__(self, message, *, source=None, line=None, qid=None):
        self.source = source
        self.line = line
        self.qid = qid
        where = []
        if source is not None:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        if qid is not None:
            where.append(f"qid {qid}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class UndefinedMetricError(ValueError):
    """A metric has no defined value for the given inputs."""


class UndefinedCorrelationError(UndefinedMetricError):
    """Pearson correlation is undefined (constant series or too few points)."""


class UsageError(ValueError):
    """Invalid command-line configuration (exit code 1)."""
