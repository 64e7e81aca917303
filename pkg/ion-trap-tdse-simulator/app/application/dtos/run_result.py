"""
Run Result DTO

Result dictionary returned by every CLI use case.
"""

from typing import Any, Dict

from tools.src.exceptions import SimulatorError


def new_result() -> Dict[str, Any]:
    """
    Empty result

    Returns:
        Dict containing:
            - success: Whether the stage completed
            - outputs: Paths of the written artifacts
            - summary: Key figures reported on the console
            - errors: Error messages
            - warnings: Warning messages
            - exit_code: Process exit status
    """
    return {
        "success": True,
        "outputs": [],
        "summary": {},
        "errors": [],
        "warnings": [],
        "exit_code": 0,
    }


def fail(result: Dict[str, Any], error: SimulatorError) -> Dict[str, Any]:
    """Record a simulator failure with its exit code"""
    result["success"] = False
    result["errors"].append(str(error))
    result["exit_code"] = error.exit_code
    return result
