from django.utils.translation import gettext_lazy as _

from poi_core.exceptions import POICoreException


class EmptyRanks(POICoreException):
    message = _('Metrics need at least one rank.')


class NoValidSamples(POICoreException):
    message = _('No trajectory with a supervised position to evaluate.')
