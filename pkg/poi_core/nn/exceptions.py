from django.utils.translation import gettext_lazy as _

from poi_core.exceptions import POICoreException


class ShapeMismatch(POICoreException):
    message = _('Operand shapes do not agree.')


class AllMaskedRow(POICoreException):
    message = _('Softmax row has no unmasked entry.')


class IndexOutOfRange(POICoreException):
    message = _('Index out of range.')
