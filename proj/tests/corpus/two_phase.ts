system two_phase {
  var x: int[0,5];
  var y: int[0,5];
  init: true;
  next: (x >= 1 && x' = x - 1 && y' = y) || (x <= 0 && y >= 1 && y' = y - 1 && x' = x);
  safe: x >= 0 && y >= 0;
}
