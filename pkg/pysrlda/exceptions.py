'''Exception hierarchy shared by all pysrlda modules.'''

class SRLDAError(Exception):
    '''Base class for all errors raised by pysrlda.'''

class DimensionError(SRLDAError, ValueError):
    '''Feature dimensions of two inputs do not agree.'''

class InsufficientSamplesError(SRLDAError, ValueError):
    '''Too few samples (overall or per class) for the requested estimate.'''

class NotSymmetricError(SRLDAError, ValueError):
    '''Matrix is not symmetric to within the allowed tolerance.'''

class EigenSolverError(SRLDAError, RuntimeError):
    '''The symmetric eigensolver failed to converge.'''

class UndetectableSpikeError(SRLDAError, ValueError):
    '''Spike lies at or below the detectability threshold sqrt(J).'''

class InfeasibleEstimateError(SRLDAError, ValueError):
    '''A plug-in estimate has a non-positive debiased denominator.'''

class InadmissibleParameterError(SRLDAError, ValueError):
    '''Regularization or reparametrization point outside its admissible set.'''

class EmptyGridError(SRLDAError, ValueError):
    '''No admissible point is left on the search grid.'''

class SingularCovarianceError(SRLDAError, ValueError):
    '''Pooled covariance cannot be inverted.'''

class DataFormatError(SRLDAError, ValueError):
    '''Input data file could not be parsed.

    Parameters
    ----------
    message : str
        Description of the problem.
    line : int, optional
        1-based line number in the offending file.
    '''
    def __init__(self, message, line=None):
        if line is not None:
            message = 'line %d: %s' % (line, message)
        super().__init__(message)
        self.line = line

class ConfigError(SRLDAError, ValueError):
    '''Configuration file or option is invalid.

    Parameters
    ----------
    message : str
        Description of the problem.
    key : str, optional
        Offending configuration key, as ``section.key``.
    '''
    def __init__(self, message, key=None):
        if key is not None:
            message = '%s: %s' % (key, message)
        super().__init__(message)
        self.key = key

class ModelFormatError(SRLDAError, ValueError):
    '''Serialized model is malformed or has an unsupported version.'''
