"""Iterative Tarjan SCC over integer-indexed adjacency lists."""


def strongly_connected_components(n, succ):
    """Return SCCs of the graph with vertices 0..n-1 in reverse topological order.

    `succ[v]` is an iterable of successor vertex indices.
    """
    index = [0] * n
    low = [0] * n
    on_stack = [False] * n
    visited = [False] * n
    stack = []
    comps = []
    counter = 1

    for root in range(n):
        if visited[root]:
            continue
        work = [(root, iter(succ[root]))]
        visited[root] = True
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if not visited[w]:
                    visited[w] = True
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                elif on_stack[w]:
                    if index[w] < low[v]:
                        low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps


def nontrivial_sccs(n, succ):
    """SCCs that contain a cycle: more than one vertex, or a self-loop."""
    out = []
    for comp in strongly_connected_components(n, succ):
        if len(comp) > 1 or comp[0] in succ[comp[0]]:
            out.append(comp)
    return out


def reachable(starts, succ):
    """Set of vertices reachable from `starts` (inclusive)."""
    seen = set(starts)
    todo = list(starts)
    while todo:
        v = todo.pop()
        for w in succ[v]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen
