"""
Run-ledger initialization script.

Creates the ledger tables if they don't exist, or recreates them on request.
"""

import logging
import sys
from pathlib import Path

from sqlalchemy import inspect, text
from sqlmodel import SQLModel, create_engine

sys.path.append(str(Path(__file__).parent.parent.parent))

from src.config import settings
from src.history import RunHistory

# Configure logging
logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)

EXPECTED_TABLES = (RunHistory.__tablename__,)


def check_tables_exist(engine) -> dict[str, bool]:
    """Check which ledger tables already exist.

    Returns:
        dict: Table name -> exists boolean
    """
    existing = {name.lower() for name in inspect(engine).get_table_names()}
    return {name: name.lower() in existing for name in EXPECTED_TABLES}


def get_table_info(engine, table_name: str) -> dict:
    """Get information about an existing table."""
    inspector = inspect(engine)
    try:
        columns = inspector.get_columns(table_name)
        return {"columns": [col["name"] for col in columns]}
    except Exception as e:
        logger.warning(f"Could not get info for table {table_name}: {e}")
        return {"columns": []}


def prompt_user_action(table_status: dict[str, bool]) -> str:
    """Ask what to do with the ledger.

    Returns:
        str: User choice ('create', 'recreate', 'none', 'abort')
    """
    if not any(table_status.values()):
        logger.info(f"Missing tables: {list(table_status)}")
        response = input("Create ledger tables? (y/n): ").lower().strip()
        return "create" if response == "y" else "abort"

    logger.info(f"Ledger tables exist: {[name for name, ok in table_status.items() if ok]}")
    print("\nOptions:")
    print("(r) Recreate the ledger (DROP and CREATE - will lose all recorded runs)")
    print("(k) Keep existing tables (no changes)")
    print("(a) Abort")

    action_map = {"r": "recreate", "k": "none", "a": "abort"}
    while True:
        response = input("Choose action (r/k/a): ").lower().strip()
        if response in action_map:
            return action_map[response]
        print("Invalid choice. Please enter 'r', 'k', or 'a'.")


def confirm_destructive_action() -> bool:
    """Get confirmation for destructive operations."""
    print("\nWARNING: This will DELETE ALL RECORDED RUNS!")
    response = input("Are you absolutely sure? Type 'yes' to confirm: ").strip()
    return response.lower() == "yes"


def init_database(database_url: str | None = None, action: str | None = None) -> dict[str, bool]:
    """Initialize the ledger tables, prompting unless an action is given."""
    engine = create_engine(database_url or settings.DATABASE_URL, echo=False)
    with engine.connect() as conn:
        conn.execute(text("SELECT 1"))
    logger.info("Database connection successful")

    table_status = check_tables_exist(engine)
    logger.info(f"Table status: {table_status}")

    action = action or prompt_user_action(table_status)
    if action == "abort":
        logger.info("Operation aborted by user")
        return table_status
    if action == "none":
        logger.info("No changes needed")
        return table_status

    tables = [SQLModel.metadata.tables[name] for name in EXPECTED_TABLES]
    if action == "recreate":
        if not confirm_destructive_action():
            logger.info("Operation cancelled by user")
            return table_status
        logger.info("Dropping ledger tables...")
        SQLModel.metadata.drop_all(engine, tables=tables)

    SQLModel.metadata.create_all(engine, tables=tables)
    logger.info("Ledger tables ready")

    final_status = check_tables_exist(engine)
    for table_name, exists in final_status.items():
        if exists:
            info = get_table_info(engine, table_name)
            logger.info(f"Table '{table_name}' columns: {info.get('columns', [])}")
    return final_status


if __name__ == "__main__":
    print("nhaah run-ledger initialization")
    print("=" * 50)
    print(f"Database URL: {settings.DATABASE_URL}")
    print()

    try:
        init_database()
    except Exception as e:
        logger.error(f"Database initialization failed: {e}")
        sys.exit(1)
    print("\nLedger initialization completed!")
