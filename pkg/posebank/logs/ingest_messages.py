# info
FIT_PCA = 'Fitting PCA over %d foreground pixels from %d maps ...'
EXPLAINED_VARIANCE = 'Explained variance ratio of kept components: %s.'

# warning
DEGENERATE_COMPONENTS = 'Components %s have zero variance; emitting them as zeros.'

# error
FEW_CHANNELS = 'Feature map %s has %d channels; at least %d are required.'
CHANNEL_MISMATCH = 'Feature maps have different channel counts: %s.'
BAD_MASK = 'Mask %s does not match its feature map.'
MASK_COUNT = 'Got %d masks for %d feature maps.'
EMPTY_FOREGROUND = 'No foreground pixels to fit PCA.'
