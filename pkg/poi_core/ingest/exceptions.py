from django.utils.translation import gettext_lazy as _

from poi_core.exceptions import DataError


class MalformedLine(DataError):
    message = _('Malformed line')

    def __init__(self, line_no, reason):
        self.line_no = line_no
        self.reason = reason
        super(MalformedLine, self).__init__('%s %s: %s' % (self.message, line_no, reason))


class TooManyMalformedLines(DataError):
    message = _('Too many malformed lines')

    def __init__(self, errors, total):
        self.errors = errors
        self.total = total
        super(TooManyMalformedLines, self).__init__('%s (%s of %s), first at line %s: %s' % (
            self.message, len(errors), total, errors[0].line_no, errors[0].reason))


class EmptyAfterFilter(DataError):
    message = _('No check-in record survived the sparsity filter.')


class EmptyTrain(DataError):
    message = _('Train split would be empty.')
