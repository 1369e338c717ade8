"""
Processed-dataset bundle, a JSON document:

    {
        "format": "poi-core-dataset",
        "format_version": 1,
        "config": {...run configuration echo...},
        "statistics": {"users": .., "pois": .., "categories": .., "checkins": .., "trajectories": ..},
        "id_maps": {"user_ids": [..], "poi_ids": [..], "category_ids": [..], "category_names": [..],
                    "poi_meta": [[category, lat, lon], ..]},
        "splits": {"train": [{"user": 0, "checkins": [[poi, posix_seconds, tz_offset_minutes], ..]}, ..],
                   "validation": [..], "test": [..]},
        "malformed_lines": [[line_no, reason], ..]
    }

Timestamps are whole POSIX seconds (UTC), floats are written with their shortest round-trip representation.
"""
import calendar
import json

from collections import OrderedDict
from datetime import datetime

import pytz

from django.utils.translation import gettext_lazy as _

from poi_core.exceptions import DataError
from poi_core.utils import dumps
from poi_core.ingest import CheckIn, IdMaps, ProcessedDataset, SplitDataset, Trajectory
from poi_core.ingest.exceptions import MalformedLine


FORMAT = 'poi-core-dataset'
FORMAT_VERSION = 1


def encode_time(time):
    return calendar.timegm(time.utctimetuple())


def decode_time(value):
    return datetime.fromtimestamp(value, pytz.utc)


def encode_trajectories(trajectories):
    return [
        {
            'user': trajectory.user,
            'checkins': [[checkin.poi, encode_time(checkin.time), checkin.tz_offset]
                         for checkin in trajectory.checkins],
        }
        for trajectory in trajectories
    ]


def decode_trajectories(data):
    return [
        Trajectory(item['user'], tuple(CheckIn(item['user'], poi, decode_time(time), tz_offset)
                                       for poi, time, tz_offset in item['checkins']))
        for item in data
    ]


def to_dict(processed, config_echo=None):
    return {
        'format': FORMAT,
        'format_version': FORMAT_VERSION,
        'config': config_echo or {},
        'statistics': dict(processed.statistics),
        'id_maps': processed.id_maps.as_dict(),
        'splits': {
            'train': encode_trajectories(processed.split.train),
            'validation': encode_trajectories(processed.split.validation),
            'test': encode_trajectories(processed.split.test),
        },
        'malformed_lines': [[error.line_no, str(error.reason)] for error in processed.malformed_lines],
    }


def from_dict(data):
    if data.get('format') != FORMAT:
        raise DataError(_('Not a processed-dataset bundle.'))
    if data.get('format_version') != FORMAT_VERSION:
        raise DataError(_('Unsupported bundle format version %s.') % data.get('format_version'))

    splits = data['splits']
    split = SplitDataset(decode_trajectories(splits['train']), decode_trajectories(splits['validation']),
                         decode_trajectories(splits['test']))
    statistics = OrderedDict((key, data['statistics'][key])
                             for key in ('users', 'pois', 'categories', 'checkins', 'trajectories'))
    errors = [MalformedLine(line_no, reason) for line_no, reason in data.get('malformed_lines', ())]
    return ProcessedDataset(split, IdMaps(**data['id_maps']), statistics, errors)


def dump(processed, stream, config_echo=None):
    stream.write(dumps(to_dict(processed, config_echo)))


def load(stream):
    try:
        data = json.load(stream)
    except ValueError as ex:
        raise DataError(_('Bundle is not valid JSON: %s') % ex)
    return from_dict(data), data.get('config', {})
