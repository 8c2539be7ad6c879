"""Exception types shared across the pipeline.

Everything derived from :class:`DataError` maps to exit status 2 on the
command line; :class:`ConfigError` maps to 1.
"""


class ExtknowError(Exception):
    pass


class ConfigError(ExtknowError):
    pass


class DataError(ExtknowError):
    pass


class MalformedSignature(DataError):
    pass


class MissingClassName(DataError):
    pass


class EmptyDescription(DataError):
    pass


class EmptyCollection(DataError):
    pass


class DuplicateDocId(DataError):
    pass


class AllZeroFrequencies(DataError):
    pass


class MalformedRecord(DataError):
    pass


class MissingConfidence(DataError):
    pass


class StrategyMismatch(DataError):
    pass


class LeakageError(DataError):
    pass


class LengthMismatch(DataError):
    pass


class EmptyCorpus(DataError):
    pass


class InsufficientInstances(DataError):
    pass
