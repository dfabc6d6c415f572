# Prime digit analysis package
