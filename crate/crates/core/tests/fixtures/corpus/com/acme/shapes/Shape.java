package com.acme.shapes;

public interface Shape {
    double area();
}
