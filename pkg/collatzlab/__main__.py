from .cli import cli_dispatch


if __name__ == "__main__":
    cli_dispatch()
