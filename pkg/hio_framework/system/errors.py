class HioError(Exception):
    pass


class ArchitectureError(HioError, ValueError):
    pass


class ShapeError(HioError, ValueError):
    pass


class NumericError(HioError, ArithmeticError):
    pass


class EmptyInputError(HioError, ValueError):
    pass


class FeatureError(HioError, ValueError):
    pass


class SelectionError(HioError, ValueError):
    pass


class RatingRangeError(HioError, ValueError):
    pass


class ConfigError(HioError, ValueError):
    pass


class DataError(HioError, ValueError):
    pass


class GateError(HioError, ValueError):
    pass


class DatasetLoadError(HioError, ValueError):
    pass


class SplitError(HioError, ValueError):
    pass


class PlanError(HioError, ValueError):
    pass


class ComparisonError(HioError, ValueError):
    pass


class FoldError(HioError):
    def __init__(self, fold_index: int, cause: Exception):
        super().__init__(f"fold {fold_index}: {cause}")
        self.fold_index = fold_index
        self.cause = cause

    def __reduce__(self):
        return (FoldError, (self.fold_index, self.cause))


class ReportError(HioError):
    def __init__(self, path, cause: Exception):
        super().__init__(f"{path}: {cause}")
        self.path = path
