#include "stdafx.h"
#include <windows.h>

// #include "no.h"
#include "tail.h"
