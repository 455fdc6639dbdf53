# info
RENDER_VIEW = 'Rendering view theta=%.4f phi=%.4f gamma=%.4f r=%.4f at %dx%d ...'

# error
INVALID_FIELD = 'Invalid feature field: %s.'
