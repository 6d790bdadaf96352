package com.acme.app;

public class Outer {
    private int depth;
    private java.util.List<Inner> inners;

    class Inner {
        int level() {
            return depth + 1;
        }
    }

    Inner first() {
        return inners.get(0);
    }

    int firstLevel() {
        return first().level();
    }
}
