# Partition files come from `scg-cli partition -o csv <workspace> <n>`;
# copy them next to this notebook. Without them, packages stand in.
csvs = sorted(glob.glob("{{PROJECT}}-npart-*.csv"))
if csvs:
    print("using", csvs[0])
    npart_df = pd.read_csv(csvs[0])
else:
    print("no partition csv found, grouping by package instead")
    codes = {p: i for i, p in enumerate(sorted(nodes_df["package"].unique()))}
    npart_df = pd.DataFrame({"id": nodes_df["id"], "npart": nodes_df["package"].map(codes)})
scg_df = pd.merge(nodes_df, npart_df, on="id")
scg_df.head()
