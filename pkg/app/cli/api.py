from app.cli.commands import bench, generate, run
from app.cli.router import CommandRouter

cli_router = CommandRouter()
cli_router.include_command(generate.command, name="generate")
cli_router.include_command(run.command, name="run")
cli_router.include_command(bench.command, name="bench")
