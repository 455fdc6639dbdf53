# info
INIT = 'Instantiating the pose estimation API.'
ROUTES = 'Setting bank and estimation routes.'
ROOT_POINT = 'Serving the landing page.'
