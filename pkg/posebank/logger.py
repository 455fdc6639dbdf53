import logging
import os
from logging.config import dictConfig


# si la variable de entorno esta vacia no se escribe archivo de logs, solo se
# usa la salida de errores
LOG_FILE = os.getenv('POSEBANK_LOG_FILE', 'posebank.log')
LOG_LEVEL = os.getenv('POSEBANK_LOG_LEVEL', 'DEBUG')

handlers = ['default', 'file'] if LOG_FILE else ['default']

log_config = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'default': {
            '()': 'uvicorn.logging.DefaultFormatter',
            'fmt': '%(levelprefix)s [%(asctime)s] - %(module)s: %(message)s',
            'datefmt': '%Y-%m-%d - %H:%M:%S',

        },
    },
    'handlers': {
        'default': {
            'formatter': 'default',
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
        },
    },
    'loggers': {
        'posebank-logger': {'handlers': handlers, 'level': LOG_LEVEL},
    },
}

if LOG_FILE:
    log_config['handlers']['file'] = {
        'formatter': 'default',
        'class': 'logging.handlers.RotatingFileHandler',
        'filename': LOG_FILE,
        'maxBytes': 10 * 1024 * 1024,
        'backupCount': 3,
    }

dictConfig(log_config)
logger = logging.getLogger('posebank-logger')
