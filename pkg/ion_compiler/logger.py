import logging

from ion_compiler.constants import LOG_LEVEL

logger = logging.getLogger()
log_handler = logging.StreamHandler()
logger.addHandler(log_handler)
logger.setLevel(LOG_LEVEL)
