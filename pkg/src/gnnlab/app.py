"""FastAPI application factory."""

from fastapi import FastAPI

from gnnlab import __version__
from gnnlab.config import settings
from gnnlab.router import router


def create_app() -> FastAPI:
    app = FastAPI(
        title=settings.app_name,
        description="Weisfeiler-Lehman comparisons and assignment decoding over HTTP",
        version=__version__,
        debug=settings.debug,
    )
    app.include_router(router)
    return app


app = create_app()
