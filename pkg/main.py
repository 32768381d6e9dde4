from app.presentation.cli.bp_cli import app

if __name__ == "__main__":
    app()
