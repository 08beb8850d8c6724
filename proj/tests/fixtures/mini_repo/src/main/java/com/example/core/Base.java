package com.example.core;

public class Base {
    protected int scale(int value) {
        return scale((long) value);
    }

    protected int scale(long value) {
        return (int) (value * 2L);
    }
}

class Counter extends Base {
    private int count;

    Counter() {
        this.count = 0;
    }

    int bump(int amount) {
        count += 1;
        return scale(amount);
    }
}
