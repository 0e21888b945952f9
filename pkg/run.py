"""Simple script to run the CLI without installing the package."""

from plurilag.main import app

if __name__ == "__main__":
    app(prog_name="plurilag")
