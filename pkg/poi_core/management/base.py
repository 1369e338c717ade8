import logging
import os
import sys

from functools import partial

from django.core.management.base import BaseCommand, CommandError

from poi_core import config
from poi_core.exceptions import (POICoreException, ConfigurationError, DomainError, DivergenceDetected,
                                 MissingArtifact)
from poi_core.forms import load_run_config
from poi_core.ingest import bundle


logger = logging.getLogger('poi-core')

CONFIG_ERROR_CODE = 1
DATA_ERROR_CODE = 2
DIVERGENCE_CODE = 3

OVERRIDES = ('seed', 'alpha', 'beta', 'epochs', 'output_dir', 'dataset_path')


def get_returncode(ex):
    if isinstance(ex, (ConfigurationError, DomainError)):
        return CONFIG_ERROR_CODE
    if isinstance(ex, DivergenceDetected):
        return DIVERGENCE_CODE
    return DATA_ERROR_CODE


def usage_error(parser, message):
    logger.error(message)
    if parser.called_from_command_line:
        parser.print_usage(sys.stderr)
        parser.exit(CONFIG_ERROR_CODE, '%s: error: %s\n' % (parser.prog, message))
    raise CommandError('Error: %s' % message, returncode=CONFIG_ERROR_CODE)


class PipelineCommand(BaseCommand):
    """
    Common options, run configuration loading and exit codes of the pipeline commands.
    """

    requires_system_checks = []

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super(PipelineCommand, self).create_parser(prog_name, subcommand, **kwargs)
        # usage errors exit like configuration errors
        parser.error = partial(usage_error, parser)
        return parser

    def add_arguments(self, parser):
        parser.add_argument('--config', dest='config_path', help='flat JSON key-value configuration file')
        parser.add_argument('--seed', type=int)
        parser.add_argument('--alpha', type=float)
        parser.add_argument('--beta', type=float)
        parser.add_argument('--epochs', type=int)
        parser.add_argument('--out', dest='output_dir', help='artifact directory')
        parser.add_argument('--dataset', dest='dataset_path', help='raw check-in file')

    def handle(self, *args, **options):
        try:
            run_config = load_run_config(options.get('config_path'),
                                         {key: options.get(key) for key in OVERRIDES})
            self.run(run_config, **options)
        except POICoreException as ex:
            logger.error(str(ex))
            raise CommandError(str(ex), returncode=get_returncode(ex))

    def run(self, run_config, **options):
        raise NotImplementedError

    def get_path(self, run_config, file_name):
        return os.path.join(run_config.output_dir, file_name)

    def get_output_path(self, run_config, file_name):
        os.makedirs(run_config.output_dir, exist_ok=True)
        return self.get_path(run_config, file_name)

    def load_bundle(self, run_config):
        path = self.get_path(run_config, config.BUNDLE_FILE_NAME)
        if not os.path.exists(path):
            raise MissingArtifact(path)
        with open(path, encoding='utf-8') as stream:
            processed, _config_echo = bundle.load(stream)
        return processed
