from django.utils.translation import gettext_lazy as _

from poi_core.exceptions import POICoreException


class AllMasked(POICoreException):
    message = _('Loss has no valid position.')
