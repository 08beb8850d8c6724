package com.example.app;

import com.example.core.Counter;
import com.example.util.*;

public class Report {
    String render(int total) {
        Counter counter = new Counter();
        counter.bump(trim(total));
        return Format.pad(total);
    }

    int trim(int total) {
        return total - 1;
    }
}
