"""Scripts package for MedTechAi RCM Assistant."""
