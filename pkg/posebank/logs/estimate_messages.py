# info
BANK_PATH_SET = 'Pose bank path set to: %s'
READ_BANK_INFO = 'Describing the served pose bank.'
ESTIMATE_POSE = 'Estimating pose of %s (%s mode) ...'
ESTIMATED_POSE = 'Estimated bin %d for %s.'

# error
BANK_NOT_FOUND = 'Pose bank %s not found.'
BANK_UNREADABLE = 'Pose bank %s could not be read: %s'
BAD_QUERY = 'Rejected query %s: %s'
