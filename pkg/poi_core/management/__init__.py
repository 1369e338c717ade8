import sys

from django.core import management


# public command names that are not valid module names
COMMAND_ALIASES = {
    'popularity-report': 'popularity_report',
}


def get_command_name(name):
    return COMMAND_ALIASES.get(name, name)


def call_command(name, *args, **options):
    return management.call_command(get_command_name(name), *args, **options)


def execute_from_command_line(argv=None):
    """
    manage.py entry point which also accepts the hyphenated command names.
    """
    argv = list(sys.argv if argv is None else argv)
    if len(argv) > 1:
        argv[1] = get_command_name(argv[1])
    management.execute_from_command_line(argv)
