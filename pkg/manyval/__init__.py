# Workbench for finite-valued logical matrices
