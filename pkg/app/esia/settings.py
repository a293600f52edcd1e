"""
Django settings for the esia project.

The project has no database and no URL routes: every stage of the toolkit
is a management command. Tunables below can be overridden through the
environment.

For more information on this file, see
https://docs.djangoproject.com/en/4.2/topics/settings/
"""
import os
import sys
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'django-insecure-esia-strip-simulation-toolkit')

DEBUG = os.environ.get('DJANGO_DEBUG', '0') == '1'

ALLOWED_HOSTS = []

# Application definition

INSTALLED_APPS = [
    'rest_framework',

    'core.apps.CoreConfig',
    'attack.apps.AttackConfig',
    'strips.apps.StripsConfig',
    'dataset.apps.DatasetConfig',
    'evaluation.apps.EvaluationConfig',
]

DATABASES = {}

REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
    'COMPACT_JSON': True,
}

# Internationalization
# https://docs.djangoproject.com/en/4.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

# Logging
# Diagnostics go to stderr; stdout is reserved for the JSON some commands print.

# `manage.py test` only shows warnings unless ESIA_LOG_LEVEL says otherwise
TESTING = sys.argv[1:2] == ['test']
LOG_LEVEL = os.environ.get('ESIA_LOG_LEVEL', 'WARNING' if TESTING else 'INFO').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'stderr': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'plain',
        },
    },
    'loggers': {
        app: {'handlers': ['stderr'], 'level': LOG_LEVEL, 'propagate': False}
        for app in ('core', 'attack', 'strips', 'dataset', 'evaluation')
    },
}

# Camera model

ESIA_BAYER_PATTERN = os.environ.get('ESIA_BAYER_PATTERN', 'RGGB').upper()

ESIA_STRIP_SAMPLER = {
    'MIN_STRIP_HEIGHT': int(os.environ.get('ESIA_MIN_STRIP_HEIGHT', 4)),
    'MAX_STRIP_HEIGHT': int(os.environ.get('ESIA_MAX_STRIP_HEIGHT', 32)),
    'MAX_PLACEMENT_ATTEMPTS': int(os.environ.get('ESIA_MAX_PLACEMENT_ATTEMPTS', 1000)),
}

# Dataset subcategories kept by the filter

ESIA_SUBCATEGORY_FILTER = {
    'weather': ['overcast', 'clear', 'rainy', 'snowy', 'partly cloudy'],
    'timeofday': ['daytime', 'night', 'dawn'],
    'scene': ['city street', 'highway', 'residential'],
    'MIN_IMAGES': int(os.environ.get('ESIA_MIN_IMAGES', 0)),
}

# Inspection and statistics

ESIA_DETECTION_THRESHOLD = float(os.environ.get('ESIA_DETECTION_THRESHOLD', 0.5))

ESIA_TTEST_VARIANT = os.environ.get('ESIA_TTEST_VARIANT', 'welch')

ESIA_SIGNIFICANCE_LEVEL = float(os.environ.get('ESIA_SIGNIFICANCE_LEVEL', 0.05))
