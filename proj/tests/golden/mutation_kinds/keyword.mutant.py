def f(a1):
    for i in range(len(a1)):
        if a1[i] > 2:
            break
        a1[i] = 0
    return a1
