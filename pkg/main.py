"""
Entry point for running numrange-composition from a checkout.
"""
from app.main import main

if __name__ == "__main__":
    main()
