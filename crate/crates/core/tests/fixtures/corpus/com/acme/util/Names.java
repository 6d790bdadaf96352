package com.acme.util;

import static com.acme.util.Strings.isEmpty;
import com.acme.shapes.*;

public class Names {
    public String describe(Shape shape, String name) {
        if (isEmpty(name)) {
            return Strings.EMPTY;
        }
        return name + shape.area();
    }
}
