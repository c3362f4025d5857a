"""Critical groups of graphs, signed graphs and voltage graphs."""
