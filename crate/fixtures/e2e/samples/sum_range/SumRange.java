static int sumRange(int[] values, int from, int to) {
    int total = 0;
    for (int i = from; i < to; i++) {
        total = total + values[i];
    }
    return total;
}
