# Tools source package
