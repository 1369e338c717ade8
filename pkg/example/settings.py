# Django settings of the example host project.
import os


PROJECT_DIR = os.path.abspath(
    os.path.join(os.path.dirname(__file__))
)

DEBUG = True

# Make this unique, and don't share it with anybody.
SECRET_KEY = 'poi-core-example-4r8#k1v!q2m^z7w0x9p3s6d5f'

# Local time zone for this installation. Check-in times are stored in UTC.
TIME_ZONE = 'UTC'

LANGUAGE_CODE = 'en'

# If you set this to False, Django will make some optimizations so as not
# to load the internationalization machinery.
USE_I18N = True

USE_TZ = True

INSTALLED_APPS = (
    'django.contrib.contenttypes',

    # POI
    'poi_core',
)

# The pipeline keeps no state in a database; the test runner still needs one.
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': ':memory:',
    },
}

DEFAULT_AUTO_FIELD = 'django.db.models.AutoField'

# Artifacts of the management commands
POI_OUTPUT_DIR = os.path.join(PROJECT_DIR, 'var', 'poi')

# Pipeline milestones of the 'poi-core' logger go to the console.
# See http://docs.djangoproject.com/en/dev/topics/logging for
# more details on how to customize your logging configuration.
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '%(asctime)s %(levelname)s %(message)s'
        }
    },
    'handlers': {
        'console': {
            'level': 'DEBUG',
            'class': 'logging.StreamHandler',
            'formatter': 'simple'
        }
    },
    'loggers': {
        'poi-core': {
            'handlers': ['console'],
            'level': os.environ.get('POI_LOG_LEVEL', 'WARNING'),
            'propagate': True,
        },
    }
}
