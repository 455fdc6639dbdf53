# info
READ_FIELD = 'Reading feature field from %s ...'
WRITE_FIELD = 'Writing feature field to %s ...'
READ_BANK = 'Reading pose bank from %s ...'
WRITE_BANK = 'Writing pose bank with %d templates to %s ...'
READ_DATASET = 'Reading dataset manifest %s ...'
WRITE_REPORT = 'Writing evaluation report to %s ...'

# error
BAD_MAGIC = 'Format check failed for %s: unexpected magic %r.'
TRUNCATED_FILE = 'Format check failed for %s: truncated or oversized payload.'
TRAILING_BYTES = 'Format check failed for %s: trailing bytes.'
BAD_MANIFEST = 'Manifest check failed for %s.'
