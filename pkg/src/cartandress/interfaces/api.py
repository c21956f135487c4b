import os
import uuid
from pathlib import Path
from typing import Any, Dict, List, Optional

import aiofiles
import aiofiles.os
from fastapi import FastAPI, File, Form, HTTPException, UploadFile
from fastapi.concurrency import run_in_threadpool
from pydantic import BaseModel, Field

from cartandress.core.exceptions import (
    CartanDressError,
    ConfigurationError,
    DataSourceError,
    DegenerateFieldError,
    LagrangianError,
    ScenarioError,
)
from cartandress.core.factories import SuiteFactory
from cartandress.core.models import CONVENTIONS, Scenario
from cartandress.core.verifier import run_lagrangian, run_verification
from cartandress.io.file_reader import FileReader
from cartandress.io.storage_adapters import LocalDiskAdapter
from cartandress.utils.config_loader import load_and_merge_config
from cartandress.utils.logger import setup_logger

logger = setup_logger()


app = FastAPI(title="Cartan Dressing Verifier", version="1.0")

PROJECT_ROOT = Path(__file__).resolve().parents[3]
API_DATA_DIR = Path(os.getenv("CARTAN_DRESS_UPLOAD_DIR", PROJECT_ROOT / "data/api/uploads"))
API_DATA_DIR.mkdir(parents=True, exist_ok=True)


class RunOptions(BaseModel):
    """Run settings shared by the verification and Lagrangian endpoints."""
    seed: Optional[int] = None
    points: Optional[int] = Field(default=None, ge=1)
    tolerance: Optional[float] = Field(default=None, gt=0)
    corrupt_p: float = 0.0
    threads: int = Field(default=1, ge=1)


class VerifyRequest(RunOptions):
    """JSON request payload: scenario mapping plus run options."""
    scenario: Dict[str, Any]
    suites: List[str] = Field(default_factory=list)


class LagrangianRequest(RunOptions):
    scenario: Dict[str, Any]
    lagrangian_points: int = Field(default=10, ge=1)


def _run_config(options: Dict[str, Any]):
    cleaned = {k: v for k, v in options.items() if v is not None}
    return load_and_merge_config(cleaned)


async def _execute(fn, scenario: Scenario, options: Dict[str, Any]) -> Dict[str, Any]:
    """Run a blocking pipeline in the thread pool and map domain errors to HTTP codes."""
    try:
        cfg = await run_in_threadpool(_run_config, options)
        result = await run_in_threadpool(fn, scenario, cfg)
    except DegenerateFieldError as e:
        raise HTTPException(status_code=422, detail={"error": str(e), "point": e.point})
    except (ScenarioError, ConfigurationError, DataSourceError, LagrangianError) as e:
        raise HTTPException(status_code=400, detail=f"Invalid input: {e}")
    except CartanDressError as e:
        logger.error(f"Verification failed: {e}")
        raise HTTPException(status_code=500, detail=f"Verification failed: {e}")
    return result.to_dict()


def _parse_scenario(data: Dict[str, Any]) -> Scenario:
    try:
        return Scenario.from_dict(data)
    except ScenarioError as e:
        raise HTTPException(status_code=400, detail=f"Invalid input: {e}")


@app.get("/")
def root_service():
    """Service metadata and available endpoint overview."""
    return {
        "service": "Cartan Dressing Verifier API",
        "version": "1.0",
        "description": (
            "Verifies conformal Cartan geometry identities and dressing laws on a scenario. "
            "Use /docs for full Swagger UI or /api/v1/verify to run the suites."
        ),
        "endpoints": {
            "health": "/health",
            "suites": "/api/v1/suites",
            "verify": "/api/v1/verify (POST)",
            "verify_upload": "/api/v1/verify/upload (POST)",
            "lagrangian": "/api/v1/lagrangian (POST)",
            "cleanup_uploads": "/api/v1/uploads/cleanup",
        },
        "status": "Running",
    }


@app.get("/health")
def health_check():
    """Health check endpoint."""
    return {"status": "ok", "backend": os.getenv("STORAGE_BACKEND", "local")}


@app.get("/api/v1/suites")
def list_suites():
    """Registered suites with default tolerance and reference statement."""
    suites = []
    for name in SuiteFactory.names():
        suite = SuiteFactory.create(name)
        suites.append({"name": name, "tolerance": suite.default_tolerance, "reference": suite.reference})
    return {"suites": suites, "conventions": CONVENTIONS}


@app.post("/api/v1/verify")
async def verify(request: VerifyRequest):
    """Run the selected suites on a scenario given inline."""
    scenario = _parse_scenario(request.scenario)
    options = request.model_dump(exclude={"scenario"})
    return await _execute(run_verification, scenario, options)


@app.post("/api/v1/verify/upload")
async def verify_upload(
    scenario_file: UploadFile = File(..., description="Scenario JSON or YAML file"),
    suite: Optional[List[str]] = Form(None),
    seed: Optional[int] = Form(None),
    points: Optional[int] = Form(None),
    tolerance: Optional[float] = Form(None),
):
    """Run suites on an uploaded scenario file."""
    path = API_DATA_DIR / f"{uuid.uuid4()}_{scenario_file.filename}"
    async with aiofiles.open(path, "wb") as f:
        while content := await scenario_file.read(1024 * 1024):
            await f.write(content)

    reader = FileReader(LocalDiskAdapter())
    try:
        scenario = await run_in_threadpool(reader.load_scenario, str(path))
    except (ScenarioError, DataSourceError) as e:
        raise HTTPException(status_code=400, detail=f"Invalid input: {e}")
    finally:
        try:
            await aiofiles.os.remove(path)
        except OSError:
            pass

    options = {"suites": suite or [], "seed": seed, "points": points, "tolerance": tolerance, "threads": 1}
    return await _execute(run_verification, scenario, options)


@app.post("/api/v1/lagrangian")
async def lagrangian(request: LagrangianRequest):
    """Density table at the three dressing stages plus the potential analysis."""
    scenario = _parse_scenario(request.scenario)
    options = request.model_dump(exclude={"scenario"})
    return await _execute(run_lagrangian, scenario, options)


@app.delete("/api/v1/uploads/cleanup")
async def cleanup_uploads():
    """Remove leftover upload files."""
    deleted = []
    for f in list(API_DATA_DIR.glob("*")):
        try:
            await aiofiles.os.remove(f)
            deleted.append(f.name)
        except Exception as e:
            logger.warning(f"Could not delete {f.name}: {e}")
            continue
    return {"deleted_files": deleted, "directory": str(API_DATA_DIR)}
