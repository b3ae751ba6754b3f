from pathlib import Path
import environ

env = environ.Env(
    DJANGO_DEBUG=(bool, False),
    DJANGO_SECRET_KEY=(str, 'changeme-secret'),
    DJANGO_TIMEZONE=(str, 'UTC'),
    LOG_LEVEL=(str, ''),
    REDIS_URL=(str, 'redis://localhost:6379/0'),
    CELERY_TASK_ALWAYS_EAGER=(bool, False),
    QPROBE_OUTPUT_DIR=(str, ''),
    QPROBE_THREADS=(int, 1),
)

BASE_DIR = Path(__file__).resolve().parent.parent

# Load .env if present
ENV_FILE = BASE_DIR / '.env'
if ENV_FILE.exists():
    environ.Env.read_env(str(ENV_FILE))

SECRET_KEY = env('DJANGO_SECRET_KEY')
DEBUG = env('DJANGO_DEBUG')
ALLOWED_HOSTS = ['localhost', '127.0.0.1']

INSTALLED_APPS = [
    'apps.qdyn',
    'apps.spectral',
    'apps.dephasing',
    'apps.blp',
    'apps.bec',
    'apps.ising',
    'apps.mcwf',
    'apps.studies',
]

# Studies are pure computations; nothing is persisted through the ORM.
DATABASES = {}

LANGUAGE_CODE = 'en-us'
TIME_ZONE = env('DJANGO_TIMEZONE')
USE_I18N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Study outputs
QPROBE_OUTPUT_DIR = Path(env('QPROBE_OUTPUT_DIR') or BASE_DIR / 'output')
QPROBE_THREADS = env('QPROBE_THREADS')

# Celery
CELERY_BROKER_URL = env('REDIS_URL')
CELERY_RESULT_BACKEND = env('REDIS_URL')
CELERY_TASK_ALWAYS_EAGER = env('CELERY_TASK_ALWAYS_EAGER')
CELERY_TASK_SERIALIZER = 'json'
CELERY_RESULT_SERIALIZER = 'json'

LOG_LEVEL = env('LOG_LEVEL') or ('DEBUG' if DEBUG else 'INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'standard': {
            'format': '[{asctime}] {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'standard',
        },
    },
    'loggers': {
        'apps': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
        'celery': {
            'handlers': ['console'],
            'level': 'INFO',
            'propagate': False,
        },
        'django': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}
