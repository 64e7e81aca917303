"""
Dependency Injection Container

This module configures the dependency injection container using the
dependency-injector library. It wires the artifact repository into the
CLI use cases.

SOLID Principles:
- DIP: Binds interfaces to implementations
- SRP: Each provider creates one type of object
- OCP: New implementations can be added without modifying existing code
"""

from dependency_injector import containers, providers

from app.application.use_cases.analyze_run import AnalyzeRunUseCase
from app.application.use_cases.build_gate import BuildGateUseCase
from app.application.use_cases.build_trap import BuildTrapUseCase
from app.application.use_cases.optimize_field import OptimizeFieldUseCase
from app.application.use_cases.simulate_run import SimulateRunUseCase
from app.config import config
from app.infrastructure.repositories.filesystem_artifact_repository import FilesystemArtifactRepository


class Container(containers.DeclarativeContainer):
    """
    Dependency Injection Container

    Layer Organization:
    1. Configuration
    2. Infrastructure Layer (artifact repository)
    3. Application Layer (use cases)
    """

    # ============================================
    # Configuration
    # ============================================

    # Configuration is provided as a singleton
    app_config = providers.Singleton(lambda: config)

    # ============================================
    # Infrastructure Layer - Repository Implementations
    # ============================================

    artifact_repository = providers.Factory(
        FilesystemArtifactRepository,
        root=app_config.provided.output.output_dir,
    )

    # ============================================
    # Application Layer - Use Cases
    # ============================================

    build_trap_use_case = providers.Factory(BuildTrapUseCase, repository=artifact_repository)

    build_gate_use_case = providers.Factory(BuildGateUseCase, repository=artifact_repository)

    optimize_field_use_case = providers.Factory(OptimizeFieldUseCase, repository=artifact_repository)

    simulate_run_use_case = providers.Factory(
        SimulateRunUseCase,
        repository=artifact_repository,
        threads=app_config.provided.runtime.threads,
    )

    analyze_run_use_case = providers.Factory(AnalyzeRunUseCase, repository=artifact_repository)


# Global container instance
container = Container()
