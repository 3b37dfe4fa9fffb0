// the inductive invariant needs y <= 3*x
system scaled {
  var x: int[0,40];
  var y: int[0,40];
  init: x = 0 && y = 0;
  next: x < 10 && x' = x + 1 && y' = y + 3;
  safe: y <= 30;
}
