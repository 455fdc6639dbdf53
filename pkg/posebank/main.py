from fastapi import FastAPI
from fastapi.responses import HTMLResponse

from .logger import logger
from .logs.main_messages import *

from .routers import estimate

logger.info(INIT)
app = FastAPI(title='posebank')

logger.info(ROUTES)
app.include_router(estimate.router)


root_response = '''<html>
    <head>
        <title>posebank</title>
    </head>
    <body>
        <h1>posebank</h1>
        <p>Camera pose estimation against a bank of rendered feature templates.</p>
        <ul>
            <li><code>GET /bank</code>: grid and template shape of the served bank.</li>
            <li><code>POST /estimate</code>: upload a TFM1 feature map to estimate its pose.</li>
        </ul>
    </body>
</html>'''


@app.get('/', response_class=HTMLResponse)
async def root():
    logger.info(ROOT_POINT)
    return root_response
