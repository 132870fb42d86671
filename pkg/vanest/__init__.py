# Van Est operators
