# info
RUN_CONFIG = 'Run configuration: %s'

# error
COMMAND_FAILED = 'Command %s failed: %s'
