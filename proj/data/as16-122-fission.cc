points=16
colors=16
0 1 2 2 3 3 3 3 4 4 5 5 6 7 6 7
1 0 2 2 3 3 3 3 4 4 5 5 7 6 7 6
2 2 0 1 3 3 3 3 5 5 4 4 6 7 7 6
2 2 1 0 3 3 3 3 5 5 4 4 7 6 6 7
3 3 3 3 0 1 2 2 6 7 6 7 4 4 5 5
3 3 3 3 1 0 2 2 7 6 7 6 4 4 5 5
3 3 3 3 2 2 0 1 6 7 7 6 5 5 4 4
3 3 3 3 2 2 1 0 7 6 6 7 5 5 4 4
12 12 13 13 14 15 14 15 8 9 10 10 11 11 11 11
12 12 13 13 15 14 15 14 9 8 10 10 11 11 11 11
13 13 12 12 14 15 15 14 10 10 8 9 11 11 11 11
13 13 12 12 15 14 14 15 10 10 9 8 11 11 11 11
14 15 14 15 12 12 13 13 11 11 11 11 8 9 10 10
15 14 15 14 12 12 13 13 11 11 11 11 9 8 10 10
14 15 15 14 13 13 12 12 11 11 11 11 10 10 8 9
15 14 14 15 13 13 12 12 11 11 11 11 10 10 9 8
