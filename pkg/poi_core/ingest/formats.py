import math

import pytz

from dateutil import parser as date_parser
from django.utils.translation import gettext_lazy as _


class Layout(object):
    """
    Field-layout descriptor of a line oriented check-in log. Maps record fields to column positions.
    """

    delimiter = '\t'
    positions = {}

    @property
    def n_columns(self):
        return max(self.positions.values()) + 1

    def split(self, line):
        return line.rstrip('\r\n').split(self.delimiter)

    def get_value(self, values, field_name):
        return values[self.positions[field_name]]

    def parse_coordinate(self, value, bound):
        coordinate = float(value)
        if not math.isfinite(coordinate) or not -bound <= coordinate <= bound:
            raise ValueError(_('coordinate %s outside of [-%s, %s]') % (value, bound, bound))
        return coordinate

    def parse_offset(self, value):
        offset = int(value) if value.strip() else 0
        # minutes, fixed offsets stay within one day
        if not -1440 < offset < 1440:
            raise ValueError(_('timezone offset %s outside of (-1440, 1440)') % value)
        return offset

    def parse_timestamp(self, value):
        timestamp = date_parser.parse(value)
        if timestamp.tzinfo is None:
            timestamp = pytz.utc.localize(timestamp)
        return timestamp.astimezone(pytz.utc).replace(microsecond=0)


class TSMCLayout(Layout):
    """
    Public NYC/TKY check-in release: user, venue, category id, category name, latitude, longitude,
    timezone offset in minutes and UTC time string, tab separated.
    """

    positions = {
        'user_id': 0,
        'poi_id': 1,
        'category_id': 2,
        'category_name': 3,
        'lat': 4,
        'lon': 5,
        'tz_offset': 6,
        'timestamp': 7,
    }
