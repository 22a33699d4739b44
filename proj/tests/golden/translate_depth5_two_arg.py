def f(a1, a2):
    a2.pop(0)
    a2.extend(a1)
    for i in range(len(a2)):
        if len(a2) > 2:
            v1 = 1
        else:
            v1 = a2[i]
        a2[i] = v1
    return a2
