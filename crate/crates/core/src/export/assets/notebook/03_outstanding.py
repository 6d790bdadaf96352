# Methods placed in a different partition than the type declaring them.
def find_parent_and_parent_npart(m):
    parent = next(
        (p for p, _, data in G.in_edges(m["id"], data=True) if data["type"] == "DECLARATION"),
        None,
    )
    p = scg_df.query("id == @parent")
    if p.empty:
        return pd.Series([parent, None])
    return pd.concat([p["id"], p["npart"]], ignore_index=True)


m_df = scg_df.query('kind == "METHOD" and file != ""').copy()
if m_df.empty:
    outstanding = pd.Series(dtype=int)
else:
    m_df[["parent", "parent_npart"]] = m_df.apply(find_parent_and_parent_npart, axis=1)
    outstanding = m_df[m_df["npart"] != m_df["parent_npart"]].groupby("parent").size()
outstanding
