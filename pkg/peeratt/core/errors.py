class AttendanceError(Exception):
    """
    Base class of every error raised by peeratt.
    The exit code is what the command-line interface returns.
    """
    exit_code = 1


class NotFoundError(AttendanceError):
    """ Unknown student, class, course or category. """


class NotRegisteredError(AttendanceError):
    """ The student is not registered in the class (or course). """


class DegenerateClassError(AttendanceError):
    """ A class without registered students. """


class DegenerateStudentError(AttendanceError):
    """ A student without registered classes. """


class EmptyInputError(AttendanceError):
    pass


class ShapeError(AttendanceError):
    pass


class RangeError(AttendanceError):
    pass


class NumericalError(AttendanceError):
    pass


class UndefinedCorrelationError(AttendanceError):
    """ Correlation with a constant sequence. """


class UndefinedScoreError(AttendanceError):
    """ Silhouette of fewer than two clusters. """


class InsufficientSamplesError(AttendanceError):
    exit_code = 5


class NoValidClusteringError(AttendanceError):
    exit_code = 6


class IoError(AttendanceError):
    exit_code = 3


class IntegrityError(AttendanceError):
    exit_code = 4


class ConfigError(AttendanceError):
    exit_code = 7
