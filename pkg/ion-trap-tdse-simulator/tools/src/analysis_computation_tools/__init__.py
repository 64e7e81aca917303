# Field spectrum and trajectory analysis tools package
