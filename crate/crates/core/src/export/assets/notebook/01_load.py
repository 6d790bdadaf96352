import glob

import pandas as pd
import scg

scg_files = scg.read_scg("{{PROJECT}}")
G = scg.create_graph(scg_files)
nodes_df = scg.create_nodes_df(scg_files)
print(len(scg_files), "records,", G.number_of_nodes(), "nodes,", G.number_of_edges(), "edges")
