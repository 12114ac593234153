"""Exception types shared across the package."""


class CbirError(Exception):
    """Base class for all package errors."""


class InvalidImage(CbirError):
    """Image is undecodable, empty, or violates a preprocessing contract."""


class DimensionError(CbirError):
    """Vector/matrix operands have incompatible shapes."""


class InvalidParameter(CbirError):
    """A numeric parameter is outside its valid range."""


class ShapeError(CbirError):
    """Matrix argument has the wrong shape (e.g. non-square kernel matrix)."""


class DegenerateLabels(CbirError):
    """Training set does not contain the required number of classes."""


class DegenerateModel(CbirError):
    """Trained model has no support vectors."""


class DegenerateHyperplane(CbirError):
    """Hyperplane normal is the zero vector."""


class EmptyDataset(CbirError):
    """Dataset root holds no decodable images."""


class BadMagic(CbirError):
    """File does not start with the expected magic bytes."""


class UnsupportedVersion(CbirError):
    """File format version is not readable by this build."""


class TruncatedFile(CbirError):
    """File ends before the declared payload is complete."""
