# info
EVALUATE = 'Evaluating %d entries against %d templates (%s mode) ...'
EVALUATION_DONE = 'Evaluated %d entries (%d skipped): recovery %s, KL theta %s.'

# warning
OUT_OF_RANGE = '%d values outside the %s range were assigned to edge bins.'
SKIP_ENTRY = 'Skipping entry %s: %s'
SKIP_DEPTH = 'Ignoring depth map %s: %s'

# error
HISTOGRAM_MISMATCH = 'Cannot compare histograms: %s.'
BAD_DEPTH_STD = 'Invalid dataset depth std %r.'
