"""
Model checkpoint, a JSON document:

    {
        "format": "poi-core-checkpoint",
        "format_version": 1,
        "config": {...run configuration echo...},
        "model_config": {...ModelConfig.as_dict()...},
        "parameters": {"<name>": {"shape": [..], "data": "<base64 of little-endian float64>"}, ..},
        "training": {...best epoch and loss trace...}
    }

Parameter blobs hold the raw IEEE-754 bytes, so a load restores every value bit-exactly.
"""
import base64
import json

import numpy as np

from django.utils.translation import gettext_lazy as _

from poi_core.exceptions import DataError
from poi_core.utils import dumps
from poi_core.model import GetNextModel, ModelConfig


FORMAT = 'poi-core-checkpoint'
FORMAT_VERSION = 1

DTYPE = np.dtype('<f8')


def encode_array(value):
    return {
        'shape': list(value.shape),
        'data': base64.b64encode(np.ascontiguousarray(value, dtype=DTYPE).tobytes()).decode('ascii'),
    }


def decode_array(data):
    return np.frombuffer(base64.b64decode(data['data']), dtype=DTYPE).reshape(data['shape']).astype(np.float64)


def to_dict(model, config_echo=None, training=None):
    return {
        'format': FORMAT,
        'format_version': FORMAT_VERSION,
        'config': config_echo or {},
        'model_config': model.config.as_dict(),
        'parameters': {name: encode_array(value) for name, value in model.state_dict().items()},
        'training': training or {},
    }


def dump(model, stream, config_echo=None, training=None):
    stream.write(dumps(to_dict(model, config_echo, training)))


def read(stream):
    try:
        data = json.load(stream)
    except ValueError as ex:
        raise DataError(_('Checkpoint is not valid JSON: %s') % ex)
    if data.get('format') != FORMAT:
        raise DataError(_('Not a model checkpoint.'))
    if data.get('format_version') != FORMAT_VERSION:
        raise DataError(_('Unsupported checkpoint format version %s.') % data.get('format_version'))
    return data


def load_state(data):
    return {name: decode_array(value) for name, value in data['parameters'].items()}


def build_model(data, graph):
    model = GetNextModel(ModelConfig.from_dict(data['model_config']), graph)
    model.load_state_dict(load_state(data))
    return model


def load_model(stream, graph):
    """
    Returns the restored model and the stored document (config echo, training trace).
    """
    data = read(stream)
    return build_model(data, graph), data
