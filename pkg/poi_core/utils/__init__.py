import json

import numpy as np

from django.core.serializers.json import DjangoJSONEncoder


def str_to_class(class_string):
    module_name, class_name = class_string.rsplit('.', 1)
    # load the module, will raise ImportError if module cannot be loaded
    m = __import__(module_name, globals(), locals(), class_name)
    # get the class, will raise AttributeError if class cannot be found
    c = getattr(m, class_name)
    return c


class Enum(set):
    def __getattr__(self, name):
        if name in self:
            return name
        raise AttributeError


def get_random_state(seed):
    """
    All randomness of one run flows from the single seed key
    """
    return np.random.RandomState(seed)


def dumps(data, indent=None):
    """
    Deterministic JSON serialization used by every artifact
    """
    return json.dumps(data, cls=DjangoJSONEncoder, sort_keys=True, indent=indent, ensure_ascii=False)


def write_json_line(stream, data):
    stream.write(dumps(data))
    stream.write('\n')
    stream.flush()


def write_comment_header(stream, format_name, format_version, config_echo=None):
    """
    '#'-prefixed preamble of the tab separated artifacts
    """
    stream.write('# format: %s\n' % format_name)
    stream.write('# format_version: %s\n' % format_version)
    stream.write('# config: %s\n' % dumps(config_echo or {}))
