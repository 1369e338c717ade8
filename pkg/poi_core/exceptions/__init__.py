from django.utils.translation import gettext_lazy as _


class POICoreException(Exception):
    message = None

    def __init__(self, message=None):
        self.message = message or self.message
        super(POICoreException, self).__init__(str(self.message))

    def __str__(self):
        return str(self.message)


class ConfigurationError(POICoreException):
    message = _('Invalid configuration.')

    def __init__(self, message=None, errors=None):
        super(ConfigurationError, self).__init__(message)
        self.errors = errors or {}


class DataError(POICoreException):
    message = _('Invalid input data.')


class MissingArtifact(DataError):
    message = _('Required artifact does not exist.')

    def __init__(self, path, message=None):
        self.path = path
        super(MissingArtifact, self).__init__(message or '%s: %s' % (self.message, path))


class DomainError(POICoreException):
    message = _('Value is outside of its domain.')


class DivergenceDetected(POICoreException):
    message = _('Training diverged, epoch loss is not finite.')

    def __init__(self, epoch, loss, message=None):
        self.epoch = epoch
        self.loss = loss
        super(DivergenceDetected, self).__init__(message or '%s (epoch %s, loss %s)' % (self.message, epoch, loss))
