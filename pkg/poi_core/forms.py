import json
import math

from django import forms
from django.core.exceptions import ValidationError
from django.utils.translation import gettext_lazy as _

from poi_core import config
from poi_core.exceptions import ConfigurationError
from poi_core.ingest import SPLIT_EXCLUSION_MODES
from poi_core.model import TIME_TARGETS
from poi_core.popularity import PopularityParams
from poi_core.train_eval import EVAL_UNITS, TrainConfig


class ListField(forms.Field):
    """
    Accepts a JSON list or a comma separated string.
    """

    item_type = None
    default_error_messages = {
        'invalid': _('Enter a list of numbers.'),
    }

    def to_python(self, value):
        if value in self.empty_values:
            return []
        if isinstance(value, str):
            value = [item for item in value.split(',') if item.strip()]
        if not isinstance(value, (list, tuple)):
            raise ValidationError(self.error_messages['invalid'], code='invalid')
        try:
            return [self.item_type(item) for item in value]
        except (TypeError, ValueError):
            raise ValidationError(self.error_messages['invalid'], code='invalid')


class IntegerListField(ListField):
    item_type = int


class FloatListField(ListField):
    item_type = float


def choices(values):
    return [(value, value) for value in sorted(values)]


class ConfigFormMixin(object):

    def is_invalid(self):
        """
        Validate input data. Returns the errors dict or False.
        """
        errors = {}
        if not self.is_valid():
            errors = dict([(k, v[0]) for k, v in self.errors.items()])

        if '__all__' in errors:
            del errors['__all__']

        non_field_errors = self.non_field_errors()
        if non_field_errors:
            errors['non-field-errors'] = non_field_errors

        if errors:
            return errors

        return False


class RunConfigForm(ConfigFormMixin, forms.Form):

    dataset_path = forms.CharField(required=False)
    output_dir = forms.CharField()
    layout = forms.CharField()
    seed = forms.IntegerField(min_value=0)

    min_user_checkins = forms.IntegerField(min_value=1)
    min_poi_checkins = forms.IntegerField(min_value=1)
    window_hours = forms.FloatField(min_value=0)
    train_fraction = forms.FloatField(min_value=0, max_value=1)
    validation_fraction = forms.FloatField(min_value=0, max_value=1)
    test_fraction = forms.FloatField(min_value=0, max_value=1)
    split_exclusion = forms.ChoiceField(choices=choices(SPLIT_EXCLUSION_MODES))

    alpha = forms.FloatField(min_value=0, max_value=1)
    beta = forms.FloatField(min_value=0, max_value=1)
    recency_window_days = forms.FloatField(min_value=0)
    popularity_with_frequency = forms.BooleanField(required=False)
    self_loop_weight = forms.FloatField(min_value=0)

    user_dim = forms.IntegerField(min_value=1)
    timecat_dim = forms.IntegerField(min_value=1)
    model_dim = forms.IntegerField(min_value=1, required=False)
    heads = forms.IntegerField(min_value=1)
    layers = forms.IntegerField(min_value=1)
    ffn_dim = forms.IntegerField(min_value=1)
    gcn_hidden = IntegerListField(required=False)
    max_seq_len = forms.IntegerField(min_value=1)
    activation_slope = forms.FloatField(min_value=0)
    dropout = forms.FloatField(min_value=0, max_value=0.99)
    unscaled_attention = forms.BooleanField(required=False)
    time_target = forms.ChoiceField(choices=choices(TIME_TARGETS))

    epochs = forms.IntegerField(min_value=1)
    batch_size = forms.IntegerField(min_value=1)
    learning_rate = forms.FloatField(min_value=0)
    optimizer = forms.CharField()
    eval_unit = forms.ChoiceField(choices=choices(EVAL_UNITS))
    k_list = IntegerListField()
    alpha_grid = FloatListField()
    beta_grid = FloatListField()

    def clean_window_hours(self):
        return self._clean_positive('window_hours')

    def clean_recency_window_days(self):
        return self._clean_positive('recency_window_days')

    def clean_learning_rate(self):
        return self._clean_positive('learning_rate')

    def _clean_positive(self, name):
        value = self.cleaned_data[name]
        if value <= 0:
            raise ValidationError(_('Ensure this value is greater than 0.'))
        return value

    def clean_k_list(self):
        k_list = self.cleaned_data['k_list']
        if any(k < 1 for k in k_list):
            raise ValidationError(_('Every k must be at least 1.'))
        return sorted(set(k_list))

    def _clean_grid(self, name):
        grid = self.cleaned_data[name]
        if any(not 0.0 <= value <= 1.0 for value in grid):
            raise ValidationError(_('Grid values must be in [0, 1].'))
        return grid

    def clean_alpha_grid(self):
        return self._clean_grid('alpha_grid')

    def clean_beta_grid(self):
        return self._clean_grid('beta_grid')

    def clean_gcn_hidden(self):
        gcn_hidden = self.cleaned_data['gcn_hidden']
        if any(width < 1 for width in gcn_hidden):
            raise ValidationError(_('GCN widths must be at least 1.'))
        return gcn_hidden

    def clean(self):
        cleaned_data = super(RunConfigForm, self).clean()
        fractions = [cleaned_data.get(name) for name in ('train_fraction', 'validation_fraction', 'test_fraction')]
        if None not in fractions and (min(fractions) <= 0 or not math.isclose(sum(fractions), 1.0)):
            raise ValidationError(_('Split fractions must be positive and sum to 1.'))

        user_dim, timecat_dim = cleaned_data.get('user_dim'), cleaned_data.get('timecat_dim')
        heads, model_dim = cleaned_data.get('heads'), cleaned_data.get('model_dim')
        if user_dim and timecat_dim:
            width = 2 * user_dim + 2 * timecat_dim
            if model_dim is not None and model_dim != width:
                raise ValidationError(_('model_dim must equal 2 * user_dim + 2 * timecat_dim (%s).') % width)
            if heads and width % heads:
                raise ValidationError(_('Model width %(width)s is not divisible by %(heads)s heads.') %
                                      {'width': width, 'heads': heads})
        return cleaned_data


def get_defaults():
    return {
        'dataset_path': config.DATASET_PATH,
        'output_dir': config.OUTPUT_DIR,
        'layout': config.INGEST_LAYOUT,
        'seed': config.SEED,
        'min_user_checkins': config.MIN_USER_CHECKINS,
        'min_poi_checkins': config.MIN_POI_CHECKINS,
        'window_hours': config.TRAJECTORY_WINDOW_HOURS,
        'train_fraction': config.TRAIN_FRACTION,
        'validation_fraction': config.VALIDATION_FRACTION,
        'test_fraction': config.TEST_FRACTION,
        'split_exclusion': config.SPLIT_EXCLUSION,
        'alpha': config.POPULARITY_ALPHA,
        'beta': config.POPULARITY_BETA,
        'recency_window_days': config.RECENCY_WINDOW_DAYS,
        'popularity_with_frequency': config.POPULARITY_WITH_FREQUENCY,
        'self_loop_weight': config.SELF_LOOP_WEIGHT,
        'user_dim': config.USER_DIM,
        'timecat_dim': config.TIMECAT_DIM,
        'model_dim': None,
        'heads': config.HEADS,
        'layers': config.LAYERS,
        'ffn_dim': config.FFN_DIM,
        'gcn_hidden': list(config.GCN_HIDDEN),
        'max_seq_len': config.MAX_SEQ_LEN,
        'activation_slope': config.ACTIVATION_SLOPE,
        'dropout': config.DROPOUT,
        'unscaled_attention': config.UNSCALED_ATTENTION,
        'time_target': config.TIME_TARGET,
        'epochs': config.EPOCHS,
        'batch_size': config.BATCH_SIZE,
        'learning_rate': config.LEARNING_RATE,
        'optimizer': config.OPTIMIZER,
        'eval_unit': config.EVAL_UNIT,
        'k_list': list(config.K_LIST),
        'alpha_grid': list(config.ALPHA_GRID),
        'beta_grid': list(config.BETA_GRID),
    }


class RunConfig(object):
    """
    Validated run configuration. Every artifact embeds as_dict() as its configuration echo.
    """

    def __init__(self, cleaned_data):
        self.data = dict(cleaned_data)

    def __getattr__(self, name):
        try:
            return self.__dict__['data'][name]
        except KeyError:
            raise AttributeError(name)

    def as_dict(self):
        return {key: self.data[key] for key in sorted(self.data)}

    def get_fractions(self):
        return self.train_fraction, self.validation_fraction, self.test_fraction

    def get_popularity_params(self):
        return PopularityParams(self.alpha, self.beta, self.recency_window_days)

    def get_train_config(self):
        return TrainConfig(self.epochs, self.batch_size, self.learning_rate, self.optimizer, self.seed, self.alpha,
                           self.beta)

    def get_model_options(self):
        return {
            'user_dim': self.user_dim,
            'timecat_dim': self.timecat_dim,
            'heads': self.heads,
            'layers': self.layers,
            'ffn_dim': self.ffn_dim,
            'gcn_hidden': self.gcn_hidden,
            'max_seq_len': self.max_seq_len,
            'activation_slope': self.activation_slope,
            'dropout': self.dropout,
            'unscaled_attention': self.unscaled_attention,
            'time_target': self.time_target,
            'model_dim': self.model_dim,
        }

    def get_graph_options(self):
        return {'with_frequency': self.popularity_with_frequency, 'self_loop_weight': self.self_loop_weight}


def read_config_file(path):
    try:
        with open(path, encoding='utf-8') as config_file:
            data = json.load(config_file)
    except (OSError, ValueError) as ex:
        raise ConfigurationError(_('Cannot read configuration file %(path)s: %(error)s') %
                                 {'path': path, 'error': ex})
    if not isinstance(data, dict):
        raise ConfigurationError(_('Configuration file %s must hold a flat JSON object.') % path)
    return data


def load_run_config(config_path=None, overrides=None, data=None):
    """
    Defaults from settings, then the configuration file (or data), then non-empty overrides.
    """
    values = get_defaults()
    supplied = dict(data or {})
    if config_path:
        supplied.update(read_config_file(config_path))
    unknown = sorted(set(supplied) - set(RunConfigForm.base_fields))
    if unknown:
        raise ConfigurationError(_('Unknown configuration keys: %s') % ', '.join(unknown),
                                 {key: _('Unknown key.') for key in unknown})
    values.update(supplied)
    values.update((key, value) for key, value in (overrides or {}).items() if value is not None)

    form = RunConfigForm(data=values)
    errors = form.is_invalid()
    if errors:
        raise ConfigurationError(
            _('Invalid configuration: %s') % '; '.join('%s: %s' % (key, errors[key]) for key in sorted(errors)),
            errors
        )
    return RunConfig(form.cleaned_data)
