from datetime import datetime, timedelta

import factory
import pytz

from poi_core.ingest import CheckIn, RawCheckInRecord, Trajectory


BASE_TIME = datetime(2012, 4, 3, tzinfo=pytz.utc)


def hours(value):
    return BASE_TIME + timedelta(hours=value)


class RawCheckInRecordFactory(factory.Factory):

    class Meta:
        model = RawCheckInRecord

    user_id = factory.Sequence(lambda n: 'user_%s' % n)
    poi_id = factory.Sequence(lambda n: 'poi_%s' % n)
    category_id = 'category_0'
    category_name = 'Coffee Shop'
    lat = 40.7
    lon = -74.0
    tz_offset = 0
    timestamp = factory.Sequence(lambda n: hours(n))


class CheckInFactory(factory.Factory):

    class Meta:
        model = CheckIn

    user = 0
    poi = 0
    time = factory.Sequence(lambda n: hours(n))
    tz_offset = 0


def checkins_at(offsets, user=0, poi=0):
    """
    One check-in per offset (hours after BASE_TIME).
    """
    return [CheckInFactory(user=user, poi=poi, time=hours(offset)) for offset in offsets]


def build_trajectory(user, pois, start=0, step=1):
    return Trajectory(user, tuple(CheckInFactory(user=user, poi=poi, time=hours(start + i * step))
                                  for i, poi in enumerate(pois)))
